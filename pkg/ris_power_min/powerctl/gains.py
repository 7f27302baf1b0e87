"""
This module tabulates the effective power gains of a fixed phase beamformer and evaluates
the standard interference function f_k(p) = (Gamma_k / a_k)(sum_{i != k} c_ki p_i + sigma^2).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from typing_extensions import Self

from ris_power_min import CONFIG
from ris_power_min.cross_section.exceptions import DimensionMismatchError, DegenerateChannelError
from ris_power_min.model.data import ChannelSet, PhaseBeamformer, PowerAllocation
from ris_power_min.model.sinr import effective_gains
from ris_power_min.util.types import FloatingArray, FloatingMatrix


@dataclass(frozen=True, eq=False)
class GainTable:
    """
    Power gains of a phase beamformer.

    Attributes
    ----------
    direct: a_k = |g_kk^H theta_k|^2
    cross: c_ki = |g_ki^H theta_i|^2 for i != k; the diagonal is zero and unused
    """
    direct: FloatingArray
    cross: FloatingMatrix

    def __post_init__(self) -> None:
        num_users = len(self.direct)
        if self.cross.shape != (num_users, num_users):
            raise DimensionMismatchError(f'Cross gains of shape {self.cross.shape} do not match {num_users} users')
        if np.any(self.direct < 0) or np.any(self.cross < 0):
            raise ValueError('Power gains must be nonnegative.')

    @classmethod
    def create(cls, direct: FloatingArray, cross: FloatingMatrix) -> Self:
        """
        Creates a table from arrays; the diagonal of the cross gains is cleared.
        """
        cross = np.array(cross, dtype=float)
        np.fill_diagonal(cross, 0.0)
        return cls(direct=np.array(direct, dtype=float).reshape(-1), cross=cross)

    @property
    def num_users(self) -> int:
        return len(self.direct)

    def normalized(self, targets: FloatingArray, degenerate_gain: Optional[float] = None) -> tuple[FloatingArray,
                                                                                                    FloatingMatrix]:
        """
        Returns D = diag(Gamma_k / a_k) as a vector and the cross gain matrix C.
        Raises a DegenerateChannelError if a direct gain is below the degenerate threshold.
        """
        threshold = degenerate_gain if degenerate_gain is not None else CONFIG.power_control.degenerate_gain
        targets = np.asarray(targets, dtype=float).reshape(-1)
        if len(targets) != self.num_users:
            raise DimensionMismatchError(f'Expected {self.num_users} SINR targets, got {len(targets)}')
        for user, gain in enumerate(self.direct):
            if gain < threshold:
                raise DegenerateChannelError(user, float(gain))
        return targets / self.direct, self.cross


def build_gain_table(channels: ChannelSet, phases: PhaseBeamformer) -> GainTable:
    """
    Tabulates the direct and cross power gains of the specified phases.
    """
    gains = effective_gains(channels, phases)
    return GainTable.create(np.diag(gains), gains)


def interference_map(powers: PowerAllocation, table: GainTable, targets: FloatingArray,
                     noise_power: float) -> PowerAllocation:
    """
    Evaluates the standard interference function at the specified powers.
    """
    ratios, cross = table.normalized(targets)
    return PowerAllocation(ratios * (cross @ powers.values + noise_power))
