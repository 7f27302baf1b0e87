"""
This module solves the semidefinite relaxation of the power minimization problem.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ris_power_min.cross_section.exceptions import DegenerateChannelError
from ris_power_min.model.data import ChannelSet, SystemConfig
from ris_power_min.sdpcore.assembly import assemble_sdr_problem, decode_sdr
from ris_power_min.sdpcore.problem import SdpStatus
from ris_power_min.sdpcore.solver import solve
from ris_power_min.util.types import ComplexMatrix, FloatingArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SdrRelaxation:
    """
    Solution of the relaxed problem.

    Attributes
    ----------
    matrices: the Hermitian PSD matrices W_k, empty unless solved
    powers: p_k = [W_k]_nn
    relaxation_value_w: sum_k p_k; a lower bound of the minimal sum power with unit-modulus phases
    status: the SDP outcome
    residuals: SDP residuals
    iterations: SDP iterations
    """
    matrices: list[ComplexMatrix]
    powers: FloatingArray
    relaxation_value_w: float
    status: SdpStatus
    residuals: dict[str, float] = field(default_factory=dict)
    iterations: int = 0

    @property
    def is_solved(self) -> bool:
        return self.status == SdpStatus.OPTIMAL

    def principal_vectors(self) -> ComplexMatrix:
        """
        Returns the eigenvector of the largest eigenvalue of every W_k as rows of a K x N matrix.
        """
        vectors = []
        for matrix in self.matrices:
            _, eigenvectors = np.linalg.eigh(matrix)
            vectors.append(eigenvectors[:, -1])
        return np.array(vectors)


def solve_relaxation(channels: ChannelSet,
                     config: SystemConfig,
                     tol: Optional[float] = None,
                     max_iter: Optional[int] = None) -> SdrRelaxation:
    """
    Solves the relaxation with W_k PSD, [W_k]_nn = p_k and the SINR constraints written in W_k.
    """
    channels.check(config)
    try:
        problem = assemble_sdr_problem(channels, config.targets, config.noise_power_w)
    except DegenerateChannelError as error:
        logger.info('Relaxation cannot serve user %s', error.user)
        return SdrRelaxation([], np.full(config.num_users, np.nan), float('nan'), SdpStatus.INFEASIBLE)

    solution = solve(problem, tol, max_iter)
    if solution.status != SdpStatus.OPTIMAL:
        return SdrRelaxation([], np.full(config.num_users, np.nan), float('nan'), solution.status,
                             iterations=solution.iterations)

    matrices, powers = decode_sdr(solution, config.num_users, config.units_per_user)
    powers = np.maximum(powers, 0.0)
    value = float(np.sum(powers))
    logger.info('Relaxation value %.6e W after %s iterations', value, solution.iterations)
    return SdrRelaxation(matrices, powers, value, SdpStatus.OPTIMAL, dict(solution.residuals), solution.iterations)
