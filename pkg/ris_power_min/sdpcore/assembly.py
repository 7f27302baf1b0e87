"""
This module assembles the two semidefinite programs of the power minimization problem:
the Lagrangian dual of the phase problem and the semidefinite relaxation of its lifted form.

Both are built on noise-normalized channels with a reference power scale s, so that the internal
variables are of order one: an internal multiplier a_k stands for alpha_k = a_k s / sigma^2 and an
internal matrix entry for s times the physical one. The variable scales carry this mapping.
"""
import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ris_power_min.cross_section.exceptions import DimensionMismatchError, DegenerateChannelError
from ris_power_min.model.data import ChannelSet
from ris_power_min.sdpcore.problem import SdpProblem, SdpSolution, LmiBlock, ObjectiveSense, ConstraintSense, \
    scalar_constraint
from ris_power_min.util.types import FloatingArray, ComplexArray, ComplexMatrix

logger = logging.getLogger(__name__)


def reference_power(channels: ChannelSet, targets: FloatingArray, noise_power: float) -> float:
    """
    Returns the mean interference-free power Gamma_k sigma^2 / (sum_n |[g_kk]_n|)^2 over all users.
    """
    coherent = np.abs(channels.direct()).sum(axis=1)
    for user, value in enumerate(coherent):
        if value == 0:
            raise DegenerateChannelError(user, 0.0)
    return float(np.mean(targets * noise_power / coherent ** 2))


def _check(channels: ChannelSet, targets: FloatingArray, noise_power: float) -> FloatingArray:
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if len(targets) != channels.num_users:
        raise DimensionMismatchError(f'Expected {channels.num_users} SINR targets, got {len(targets)}')
    if np.any(targets <= 0) or not noise_power > 0:
        raise ValueError('SINR targets and noise power must be positive.')
    return targets


# dual problem

def assemble_dual_problem(channels: ChannelSet, targets: FloatingArray, noise_power: float,
                          power_scale: Optional[float] = None) -> SdpProblem:
    """
    Assembles the dual SDP
        maximize    sum_k alpha_k sigma^2
        subject to  sum_n q_kn <= 1                                                     for all k
                    diag(q_k) + sum_{i != k} alpha_i g_ik g_ik^H - (alpha_k / Gamma_k) g_kk g_kk^H  PSD   for all k
                    alpha_k >= 0
    with free q. Variables are ordered q[0,0..N-1], ..., q[K-1,..], alpha[0..K-1].
    :param channels: the channel grid
    :param targets: linear SINR targets
    :param noise_power: noise power in watts
    :param power_scale: the reference power s; defaults to `reference_power`
    :return: the problem
    """
    targets = _check(channels, targets, noise_power)
    num_users, units = channels.num_users, channels.units_per_user
    scale = power_scale if power_scale is not None else reference_power(channels, targets, noise_power)
    multiplier_scale = scale / noise_power
    alpha_offset = num_users * units

    names = tuple([f'q[{k},{n}]' for k in range(num_users) for n in range(units)]
                  + [f'alpha[{k}]' for k in range(num_users)])
    scales = np.concatenate((np.ones(alpha_offset), np.full(num_users, multiplier_scale)))
    objective = np.concatenate((np.zeros(alpha_offset), np.full(num_users, scale)))

    constraints = []
    for k in range(num_users):
        constraints.append(scalar_constraint(f'budget[{k}]', range(k * units, (k + 1) * units), np.ones(units),
                                             ConstraintSense.LESS_EQUAL, 1.0))
    for k in range(num_users):
        constraints.append(scalar_constraint(f'alpha_nonnegative[{k}]', [alpha_offset + k], [1.0],
                                             ConstraintSense.GREATER_EQUAL, 0.0))

    diagonal = np.arange(units) * (units + 1)
    blocks = []
    for k in range(num_users):
        # columns of the alpha multipliers: vec(g_ik g_ik^H), the own one weighted by -1/Gamma_k
        outer = np.empty((units * units, num_users), dtype=complex)
        for i in range(num_users):
            vector = channels.gain(i, k)
            weight = multiplier_scale if i != k else -multiplier_scale / targets[k]
            outer[:, i] = weight * np.outer(vector, vector.conj()).reshape(-1)
        q_part = sp.csr_matrix((np.ones(units), (diagonal, k * units + np.arange(units))),
                               shape=(units * units, alpha_offset + num_users))
        alpha_part = sp.hstack((sp.csr_matrix((units * units, alpha_offset)), sp.csr_matrix(outer)))
        blocks.append(LmiBlock(f'lagrangian[{k}]', np.zeros((units, units)), q_part + alpha_part))

    logger.debug('Assembled dual SDP for K=%s, N=%s with power scale %.3e W', num_users, units, scale)
    return SdpProblem(variable_names=names, objective=objective, sense=ObjectiveSense.MAXIMIZE,
                      scalar_constraints=tuple(constraints), lmi_blocks=tuple(blocks), variable_scales=scales)


def decode_dual(solution: SdpSolution, num_users: int, units_per_user: int) -> tuple[np.ndarray, FloatingArray]:
    """
    Splits the physical values of a dual solution into q (K x N) and alpha (K).
    """
    offset = num_users * units_per_user
    return solution.values[:offset].reshape(num_users, units_per_user), solution.values[offset:]


# semidefinite relaxation

def hermitian_parameter_count(units: int) -> int:
    return units * units


def hermitian_basis(units: int) -> sp.csr_matrix:
    """
    Returns the (N*N) x (N*N) matrix whose columns are the vectorized Hermitian basis matrices:
    first E_nn, then E_nm + E_mn and then j E_nm - j E_mn for all n < m, so that W[n, m] = re + j im.
    """
    upper_n, upper_m = np.triu_indices(units, k=1)
    pairs = len(upper_n)
    diagonal = np.arange(units) * (units + 1)
    upper = upper_n * units + upper_m
    lower = upper_m * units + upper_n

    rows = np.concatenate((diagonal, upper, lower, upper, lower))
    cols = np.concatenate((np.arange(units),
                           units + np.arange(pairs), units + np.arange(pairs),
                           units + pairs + np.arange(pairs), units + pairs + np.arange(pairs)))
    data = np.concatenate((np.ones(units), np.ones(pairs), np.ones(pairs),
                           np.full(pairs, 1j), np.full(pairs, -1j)))
    return sp.csr_matrix((data, (rows, cols)), shape=(units * units, units * units))


def quadratic_form_coefficients(vector: ComplexArray) -> FloatingArray:
    """
    Returns the coefficients c with g^H W g = c^T w for the Hermitian parameters w of W.
    """
    units = len(vector)
    upper_n, upper_m = np.triu_indices(units, k=1)
    cross = vector[upper_n].conj() * vector[upper_m]
    return np.concatenate((np.abs(vector) ** 2, 2 * cross.real, -2 * cross.imag))


def hermitian_from_parameters(parameters: FloatingArray, units: int) -> ComplexMatrix:
    return (hermitian_basis(units) @ parameters.astype(complex)).reshape(units, units)


def assemble_sdr_problem(channels: ChannelSet, targets: FloatingArray, noise_power: float,
                         power_scale: Optional[float] = None) -> SdpProblem:
    """
    Assembles the semidefinite relaxation
        minimize    sum_k p_k
        subject to  g_kk^H W_k g_kk >= Gamma_k (sum_{i != k} g_ki^H W_i g_ki + sigma^2)   for all k
                    [W_k]_nn = p_k                                                     for all k, n
                    W_k PSD
    Each W_k is represented by N^2 real Hermitian parameters (see `hermitian_basis`); the powers follow
    all matrix parameters.
    """
    targets = _check(channels, targets, noise_power)
    num_users, units = channels.num_users, channels.units_per_user
    scale = power_scale if power_scale is not None else reference_power(channels, targets, noise_power)
    per_user = hermitian_parameter_count(units)
    power_offset = num_users * per_user
    count = power_offset + num_users

    upper_n, upper_m = np.triu_indices(units, k=1)
    parameter_names = ([f'W[{{k}}][{n},{n}]' for n in range(units)]
                       + [f'ReW[{{k}}][{n},{m}]' for n, m in zip(upper_n, upper_m)]
                       + [f'ImW[{{k}}][{n},{m}]' for n, m in zip(upper_n, upper_m)])
    names = tuple([name.format(k=k) for k in range(num_users) for name in parameter_names]
                  + [f'p[{k}]' for k in range(num_users)])
    objective = np.concatenate((np.zeros(power_offset), np.full(num_users, scale)))

    constraints = []
    normalization = scale / noise_power
    for k in range(num_users):
        indices = []
        coefficients = []
        for i in range(num_users):
            weight = normalization if i == k else -normalization * targets[k]
            indices.append(i * per_user + np.arange(per_user))
            coefficients.append(weight * quadratic_form_coefficients(channels.gain(k, i)))
        constraints.append(scalar_constraint(f'sinr[{k}]', np.concatenate(indices), np.concatenate(coefficients),
                                             ConstraintSense.GREATER_EQUAL, targets[k]))
    for k in range(num_users):
        for n in range(units):
            constraints.append(scalar_constraint(f'diagonal[{k},{n}]', [k * per_user + n, power_offset + k],
                                                 [1.0, -1.0], ConstraintSense.EQUAL, 0.0))

    basis = hermitian_basis(units)
    blocks = []
    for k in range(num_users):
        coefficients = sp.hstack((sp.csr_matrix((per_user, k * per_user)), basis,
                                  sp.csr_matrix((per_user, count - (k + 1) * per_user))))
        blocks.append(LmiBlock(f'covariance[{k}]', np.zeros((units, units)), coefficients))

    logger.debug('Assembled SDR for K=%s, N=%s with %s variables', num_users, units, count)
    return SdpProblem(variable_names=names, objective=objective, sense=ObjectiveSense.MINIMIZE,
                      scalar_constraints=tuple(constraints), lmi_blocks=tuple(blocks),
                      variable_scales=np.full(count, scale))


def decode_sdr(solution: SdpSolution, num_users: int, units_per_user: int) -> tuple[list[ComplexMatrix], FloatingArray]:
    """
    Returns the physical matrices W_k and powers p_k of an SDR solution.
    """
    per_user = hermitian_parameter_count(units_per_user)
    matrices = [hermitian_from_parameters(solution.values[k * per_user:(k + 1) * per_user], units_per_user)
                for k in range(num_users)]
    return matrices, solution.values[num_users * per_user:]
