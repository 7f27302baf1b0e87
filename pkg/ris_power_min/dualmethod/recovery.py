"""
This module turns the multipliers of the dual SDP into phase beamformers.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from typing_extensions import Self

from ris_power_min import CONFIG
from ris_power_min.cross_section.exceptions import DegenerateRecoveryError, DimensionMismatchError
from ris_power_min.model.data import ChannelSet, PhaseBeamformer
from ris_power_min.sdpcore.assembly import decode_dual
from ris_power_min.sdpcore.problem import SdpSolution
from ris_power_min.util.types import FloatingArray, ComplexMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DualSolution:
    """
    Multipliers of the dual SDP.

    Attributes
    ----------
    q: the K * N multipliers q_kn, user by user
    alpha: the K multipliers alpha_k
    dual_objective_w: sum_k alpha_k sigma^2 in watts
    """
    q: FloatingArray
    alpha: FloatingArray
    dual_objective_w: float

    @classmethod
    def from_sdp(cls, solution: SdpSolution, num_users: int, units_per_user: int, noise_power: float) -> Self:
        """
        Extracts the multipliers of an optimal dual SDP solution; alpha is clipped at zero.
        """
        q, alpha = decode_dual(solution, num_users, units_per_user)
        alpha = np.maximum(alpha, 0.0)
        return cls(q=q.reshape(-1).copy(), alpha=alpha, dual_objective_w=float(np.sum(alpha) * noise_power))

    @property
    def num_users(self) -> int:
        return len(self.alpha)

    def q_matrix(self) -> np.ndarray:
        """
        Returns q as K x N matrix; row k holds the diagonal of Q_k.
        """
        return self.q.reshape(self.num_users, -1)

    def check(self, budget_tolerance: float = 1e-8) -> None:
        """
        Checks the multiplier budget sum_n q_kn <= 1 and alpha >= 0. Raises a ValueError if not consistent.
        """
        budgets = self.q_matrix().sum(axis=1)
        if np.any(budgets > 1 + budget_tolerance):
            raise ValueError(f'Multiplier budgets exceed one: {budgets}')
        if np.any(self.alpha < 0):
            raise ValueError(f'Negative multipliers alpha: {self.alpha}')


def recover_directions(dual: DualSolution, channels: ChannelSet, threshold: Optional[float] = None) -> ComplexMatrix:
    """
    Returns u_k = (Q_k + sum_i alpha_i g_ik g_ik^H)^+ g_kk for all users as rows of a K x N matrix.
    The pseudoinverse drops eigenvalues below threshold * lambda_max.
    """
    threshold = threshold if threshold is not None else CONFIG.dual_method.pseudo_inverse_threshold
    num_users, units = channels.num_users, channels.units_per_user
    if dual.num_users != num_users or len(dual.q) != num_users * units:
        raise DimensionMismatchError(f'Multipliers do not match channels (K={num_users}, N={units})')

    q = dual.q_matrix()
    directions = np.empty((num_users, units), dtype=complex)
    for k in range(num_users):
        incoming = np.array([channels.gain(i, k) for i in range(num_users)])
        matrix = np.diag(q[k]).astype(complex) + (incoming.T * dual.alpha) @ incoming.conj()
        matrix = (matrix + matrix.conj().T) / 2
        directions[k] = _pseudo_inverse(matrix, threshold) @ channels.gain(k, k)
    return directions


def recover_phase(dual: DualSolution, channels: ChannelSet, threshold: Optional[float] = None) -> PhaseBeamformer:
    """
    Projects the recovered directions element-wise onto the unit circle, theta_kn = u_kn / |u_kn|.
    Zero entries get phase 1.
    """
    return project_directions(recover_directions(dual, channels, threshold))


def project_directions(directions: ComplexMatrix) -> PhaseBeamformer:
    """
    Maps every entry onto the unit circle; zero entries get phase 1 unless a whole direction vanishes.
    """
    for user, direction in enumerate(directions):
        if not np.any(direction):
            raise DegenerateRecoveryError(user)
    magnitudes = np.abs(directions)
    return PhaseBeamformer(np.divide(directions, magnitudes, out=np.ones_like(directions), where=magnitudes > 0))


def closed_form_vectors(directions: ComplexMatrix) -> ComplexMatrix:
    """
    Scales every direction to the l2-norm sqrt(N) without enforcing unit modulus per element.
    """
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    units = directions.shape[1]
    return np.divide(np.sqrt(units) * directions, norms, out=np.zeros_like(directions), where=norms > 0)


def _pseudo_inverse(matrix: ComplexMatrix, threshold: float) -> ComplexMatrix:
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    largest = float(np.max(np.abs(eigenvalues)))
    keep = np.abs(eigenvalues) > threshold * largest if largest > 0 else np.zeros_like(eigenvalues, dtype=bool)
    inverse = np.zeros_like(eigenvalues)
    inverse[keep] = 1 / eigenvalues[keep]
    return (eigenvectors * inverse) @ eigenvectors.conj().T
