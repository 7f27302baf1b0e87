"""
Gaussian randomization: extraction of unit-modulus phases from the relaxed matrices.

Candidate 0 holds the phases of the principal eigenvectors. Candidate c >= 1 draws
standard_normal((K, N, 2)) from a PCG64 generator seeded with the specified seed, in candidate order,
colors the draw of user k with W_k / p_k and projects it element-wise onto the unit circle. Candidates are
therefore nested: a run with more samples evaluates a superset of the candidates of a run with fewer.
"""
import logging
from typing import Optional

import numpy as np

from ris_power_min import CONFIG
from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.cross_section.exceptions import DegenerateChannelError
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.powerctl.gains import build_gain_table
from ris_power_min.powerctl.iteration import direct_solve
from ris_power_min.sdpcore.problem import SdpStatus
from ris_power_min.sdr.relaxation import SdrRelaxation, solve_relaxation
from ris_power_min.util.types import ComplexMatrix, ComplexTensor

logger = logging.getLogger(__name__)


def coloring_factors(relaxation: SdrRelaxation) -> ComplexTensor:
    """
    Returns L_k with L_k L_k^H = W_k / p_k for every user, negative eigenvalues clipped at zero.
    """
    factors = []
    for matrix, power in zip(relaxation.matrices, relaxation.powers):
        covariance = matrix / power if power > 0 else matrix
        eigenvalues, eigenvectors = np.linalg.eigh((covariance + covariance.conj().T) / 2)
        factors.append(eigenvectors * np.sqrt(np.maximum(eigenvalues, 0.0)))
    return np.array(factors)


def unit_modulus(vectors: ComplexMatrix) -> ComplexMatrix:
    magnitudes = np.abs(vectors)
    return np.divide(vectors, magnitudes, out=np.ones_like(vectors), where=magnitudes > 0)


def draw_candidates(relaxation: SdrRelaxation, num_samples: int, seed: int):
    """
    Yields the num_samples candidate phase matrices in candidate order.
    """
    yield unit_modulus(relaxation.principal_vectors())
    if num_samples <= 1:
        return
    factors = coloring_factors(relaxation)
    rng = np.random.default_rng(seed)
    num_users, units = factors.shape[0], factors.shape[1]
    for _ in range(1, num_samples):
        draw = rng.standard_normal((num_users, units, 2))
        white = (draw[..., 0] + 1j * draw[..., 1]) / np.sqrt(2)
        yield unit_modulus(np.einsum('knm,km->kn', factors, white))


def extract_rank_one(relaxation: SdrRelaxation,
                     channels: ChannelSet,
                     config: SystemConfig,
                     num_samples: Optional[int] = None,
                     seed: int = 0) -> BeamformingSolution:
    """
    Evaluates every candidate with the direct power control solve and completes the candidate with the
    smallest sum power; the first of equal candidates wins.
    :param relaxation: a solved relaxation
    :param channels: the channels
    :param config: the system configuration
    :param num_samples: number of candidates including the principal one, defaults to the configured one
    :param seed: seed of the randomization
    :return: the SDR solution, Infeasible if no candidate admits feasible powers
    """
    num_samples = num_samples if num_samples is not None else CONFIG.sdr.num_samples
    if num_samples < 1:
        raise ValueError(f'At least one candidate is required, got {num_samples}')
    if not relaxation.is_solved:
        raise ValueError(f'Relaxation is not solved: {relaxation.status.value}')
    channels.check(config)

    best_index, best_power, best_phases = -1, np.inf, None
    feasible = 0
    for index, candidate in enumerate(draw_candidates(relaxation, num_samples, seed)):
        phases = PhaseBeamformer(candidate)
        try:
            result = direct_solve(build_gain_table(channels, phases), config.targets, config.noise_power_w)
        except DegenerateChannelError:
            continue
        if not result.feasible:
            continue
        feasible += 1
        if result.powers.total < best_power:
            best_index, best_power, best_phases = index, result.powers.total, phases

    diagnostics = {'relaxation_value_w': relaxation.relaxation_value_w,
                   'sdp_iterations': float(relaxation.iterations),
                   'feasible_candidates': float(feasible),
                   'best_candidate': float(best_index)}
    if best_phases is None:
        logger.info('None of %s candidates admits feasible powers', num_samples)
        return BeamformingSolution.failed(Method.SDR, SolutionStatus.INFEASIBLE, diagnostics=diagnostics)
    logger.debug('Candidate %s of %s is best with %.6e W', best_index, num_samples, best_power)
    return solve_with_phases(best_phases, channels, config, Method.SDR, diagnostics)


def solve_sdr(channels: ChannelSet,
              config: SystemConfig,
              num_samples: Optional[int] = None,
              seed: int = 0,
              tol: Optional[float] = None,
              max_iter: Optional[int] = None) -> BeamformingSolution:
    """
    Solves the relaxation and extracts unit-modulus phases from it.
    """
    relaxation = solve_relaxation(channels, config, tol, max_iter)
    if relaxation.status == SdpStatus.NUMERICAL_FAILURE:
        return BeamformingSolution.failed(Method.SDR, SolutionStatus.NUMERICAL_FAILURE)
    if not relaxation.is_solved:
        return BeamformingSolution.failed(Method.SDR, SolutionStatus.INFEASIBLE)
    return extract_rank_one(relaxation, channels, config, num_samples, seed)
