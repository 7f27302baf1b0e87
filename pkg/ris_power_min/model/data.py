"""
Domain types of the power minimization problem.
Array-valued types are immutable wrappers; configuration types are frozen pydantic models.
"""
from dataclasses import field
from typing import Any, Optional, Sized

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeFloat, PositiveFloat, PositiveInt, model_validator
from pydantic.dataclasses import dataclass
from typing_extensions import Self

from ris_power_min import CONFIG
from ris_power_min.cross_section.exceptions import DimensionMismatchError
from ris_power_min.model.constants import DEFAULT_NUM_USERS, DEFAULT_UNITS_PER_USER, DEFAULT_SINR_TARGET, \
    DEFAULT_PATHLOSS_EXPONENT, DEFAULT_AREA_SIDE_M, DEFAULT_RIS_RADIUS_M, DEFAULT_NOISE_POWER_W, DeploymentKind, \
    Method, SolutionStatus
from ris_power_min.util.types import ComplexArray, ComplexMatrix, ComplexTensor, FloatingArray


class Deployment(BaseModel):
    """
    Placement of the RIS rows. The radius is only used by the distributed deployment.
    """
    model_config = ConfigDict(frozen=True)

    kind: DeploymentKind = DeploymentKind.CENTRALIZED
    radius_m: PositiveFloat = DEFAULT_RIS_RADIUS_M


class SystemConfig(BaseModel):
    """
    The system setting shared by all solvers.

    Attributes
    ----------
    num_users: number of users K, equal to the number of RIS rows
    units_per_user: number of RIS elements N per row
    noise_power_w: noise power at every user in watts
    sinr_targets: linear SINR target per user; filled with the default target if omitted
    pathloss_exponent: exponent of the distance-dependent pathloss
    deployment: placement of the RIS rows
    area_side_m: side of the square area the users are dropped in
    """
    model_config = ConfigDict(frozen=True)

    num_users: PositiveInt = DEFAULT_NUM_USERS
    units_per_user: PositiveInt = DEFAULT_UNITS_PER_USER
    noise_power_w: PositiveFloat = DEFAULT_NOISE_POWER_W
    sinr_targets: tuple[PositiveFloat, ...]
    pathloss_exponent: NonNegativeFloat = DEFAULT_PATHLOSS_EXPONENT
    deployment: Deployment = Deployment()
    area_side_m: PositiveFloat = DEFAULT_AREA_SIDE_M

    @model_validator(mode='before')
    @classmethod
    def _fill_sinr_targets(cls, data: Any) -> Any:
        if isinstance(data, dict) and not data.get('sinr_targets'):
            num_users = int(data.get('num_users', DEFAULT_NUM_USERS))
            data = {**data, 'sinr_targets': (DEFAULT_SINR_TARGET,) * num_users}
        return data

    @model_validator(mode='after')
    def _check_sinr_targets(self) -> Self:
        if len(self.sinr_targets) != self.num_users:
            raise ValueError(f'Expected {self.num_users} SINR targets, got {len(self.sinr_targets)}')
        return self

    @classmethod
    def create(cls, num_users: int, units_per_user: int, sinr_target: float = DEFAULT_SINR_TARGET,
               **kwargs: Any) -> Self:
        """
        Creates a configuration with the same SINR target for all users.
        """
        return cls(num_users=num_users, units_per_user=units_per_user,
                   sinr_targets=(sinr_target,) * num_users, **kwargs)

    @property
    def targets(self) -> FloatingArray:
        """
        Returns the SINR targets as an array.
        """
        return np.array(self.sinr_targets, dtype=float)


class ChannelSet(Sized):
    """
    The K x K grid of channel vectors. Entry (k, i) is the length-N vector g_ki
    from the i-th RIS row to user k.
    """

    _gains: ComplexTensor

    def __init__(self, gains: Any):
        values = np.array(gains, dtype=complex)
        if values.ndim != 3 or values.shape[0] != values.shape[1] or values.shape[2] < 1:
            raise DimensionMismatchError(f'Channel grid must have shape (K, K, N), got {values.shape}')
        if not np.all(np.isfinite(values)):
            raise ValueError('Channel gains must be finite.')
        values.setflags(write=False)
        self._gains = values

    def __len__(self) -> int:
        return self._gains.shape[0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChannelSet) and np.array_equal(self._gains, other._gains)

    def __repr__(self) -> str:
        return f'ChannelSet[K={self.num_users}, N={self.units_per_user}]'

    @property
    def gains(self) -> ComplexTensor:
        return self._gains

    @property
    def num_users(self) -> int:
        return self._gains.shape[0]

    @property
    def units_per_user(self) -> int:
        return self._gains.shape[2]

    def gain(self, user: int, row: int) -> ComplexArray:
        """
        Returns g_ki for user k and RIS row i.
        """
        return self._gains[user, row]

    def direct(self) -> ComplexMatrix:
        """
        Returns the K x N matrix of direct channels g_kk.
        """
        index = np.arange(self.num_users)
        return self._gains[index, index]

    def check(self, config: 'SystemConfig') -> None:
        """
        Checks that these channels match the specified configuration.
        """
        if (self.num_users, self.units_per_user) != (config.num_users, config.units_per_user):
            raise DimensionMismatchError(f'Channels of size (K={self.num_users}, N={self.units_per_user}) do not '
                                         f'match configuration (K={config.num_users}, N={config.units_per_user})')


class PhaseBeamformer(Sized):
    """
    The unit-modulus phase vectors theta_k, stored as a K x N matrix.
    """

    _values: ComplexMatrix

    def __init__(self, phases: Any, check: bool = True):
        """
        :param phases: K x N complex values
        :param check: whether to enforce the configured unit-modulus tolerance; disabled for diagnostics only
        """
        values = np.array(phases, dtype=complex)
        if values.ndim != 2 or values.shape[1] < 1:
            raise DimensionMismatchError(f'Phases must have shape (K, N), got {values.shape}')
        if not np.all(np.isfinite(values)):
            raise ValueError('Phases must be finite.')
        if check:
            tolerance = CONFIG.validation.unit_modulus_tolerance
            deviation = float(np.max(np.abs(np.abs(values) - 1)))
            if deviation > tolerance:
                raise ValueError(f'Phases violate the unit-modulus constraint by {deviation}')
        values.setflags(write=False)
        self._values = values

    @classmethod
    def from_angles(cls, angles: Any) -> Self:
        return cls(np.exp(1j * np.asarray(angles, dtype=float)))

    @classmethod
    def ones(cls, num_users: int, units_per_user: int) -> Self:
        return cls(np.ones((num_users, units_per_user), dtype=complex))

    def __len__(self) -> int:
        return self._values.shape[0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhaseBeamformer) and np.array_equal(self._values, other._values)

    def __repr__(self) -> str:
        return f'PhaseBeamformer[K={self.num_users}, N={self.units_per_user}]'

    @property
    def values(self) -> ComplexMatrix:
        return self._values

    @property
    def num_users(self) -> int:
        return self._values.shape[0]

    @property
    def units_per_user(self) -> int:
        return self._values.shape[1]

    def vector(self, user: int) -> ComplexArray:
        return self._values[user]

    def max_modulus_deviation(self) -> float:
        """
        Returns max over all entries of ||theta_kn| - 1|.
        """
        return float(np.max(np.abs(np.abs(self._values) - 1)))


class PowerAllocation(Sized):
    """
    Per-user transmit powers in watts.
    """

    _values: FloatingArray

    def __init__(self, powers: Any):
        values = np.array(powers, dtype=float).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError('Powers must be finite.')
        if np.any(values < 0):
            raise ValueError(f'Powers must be nonnegative: {values}')
        values.setflags(write=False)
        self._values = values

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PowerAllocation) and np.array_equal(self._values, other._values)

    def __repr__(self) -> str:
        return f'PowerAllocation{self._values.tolist()}'

    @property
    def values(self) -> FloatingArray:
        return self._values

    @property
    def total(self) -> float:
        return float(np.sum(self._values))


@dataclass(config=ConfigDict(arbitrary_types_allowed=True), frozen=True)
class BeamformingSolution:
    """
    Result of one beamforming method on one channel realization.

    Attributes
    ----------
    method: the method that produced this solution
    status: Optimal and Feasible solutions carry phases, powers and SINRs
    phases: the phase beamformer
    powers: the transmit powers
    sinrs: the achieved linear SINR per user
    diagnostics: named scalars such as iterations, duality_gap_rel or residuals
    """
    method: Method
    status: SolutionStatus
    phases: Optional[PhaseBeamformer] = None
    powers: Optional[PowerAllocation] = None
    sinrs: Optional[np.ndarray] = None
    diagnostics: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.is_feasible and (self.phases is None or self.powers is None or self.sinrs is None):
            raise ValueError(f'A {self.status.value} solution requires phases, powers and SINRs.')

    @property
    def is_feasible(self) -> bool:
        return self.status in (SolutionStatus.OPTIMAL, SolutionStatus.FEASIBLE)

    @property
    def sum_power_w(self) -> float:
        """
        Returns the sum of all transmit powers, NaN without powers.
        """
        if self.powers is None:
            return float('nan')
        return self.powers.total

    @classmethod
    def failed(cls, method: Method, status: SolutionStatus,
               phases: Optional[PhaseBeamformer] = None,
               diagnostics: Optional[dict[str, float]] = None) -> Self:
        """
        Creates a solution without powers for an infeasible or failed run.
        """
        return cls(method=method, status=status, phases=phases, diagnostics=dict(diagnostics or {}))
