"""
This module designs unit-modulus zero-forcing phases. Exact nulling of the other users is only
approached: the phases are pulled towards the null space of the cross channels by a penalty

    maximize_{theta, v}  Re(g^H Z v) - lambda ||theta - Z v||^2,   |theta_n| = 1

solved by alternating exact maximization over theta and v. The direct channel g enters normalized
to per-element unit power, which makes lambda independent of the pathloss.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ris_power_min import CONFIG
from ris_power_min.model.constants import Method
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.util.types import ComplexArray, ComplexMatrix

logger = logging.getLogger(__name__)

# accuracy of the projector properties
PROJECTOR_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class ZfState:
    """
    State of the penalized zero-forcing design of one user.

    Attributes
    ----------
    projector: Z = I - G (G^H G)^+ G^H, the orthogonal projector onto the complement of the cross channels
    cross_channels: G, the N x (K-1) matrix of channels g_ik from this user's row to all other users
    aux: the auxiliary vector v
    penalty: the penalty factor lambda
    """
    projector: ComplexMatrix
    cross_channels: ComplexMatrix
    aux: ComplexArray
    penalty: float

    def __post_init__(self) -> None:
        projector = self.projector
        if np.max(np.abs(projector @ projector - projector), initial=0.0) > PROJECTOR_TOLERANCE:
            raise ValueError('Zero-forcing projector is not idempotent.')
        if self.cross_channels.size:
            scale = float(np.max(np.abs(self.cross_channels)))
            if np.max(np.abs(projector @ self.cross_channels)) > PROJECTOR_TOLERANCE * max(scale, 1e-300):
                raise ValueError('Zero-forcing projector does not annihilate the cross channels.')


@dataclass(frozen=True)
class ZfFeasibility:
    """
    The necessary nulling condition 2 max_n |[g_ki]_n| <= sum_n |[g_ki]_n| per user k and row i != k.
    A False entry proves that unit-modulus phases of row i cannot null user k.
    """
    table: np.ndarray
    feasible: bool


@dataclass(frozen=True)
class ZfPhaseResult:
    phases: ComplexArray
    trace: tuple[float, ...]
    iterations: int
    state: ZfState


def cross_channel_matrix(channels: ChannelSet, user: int) -> ComplexMatrix:
    """
    Returns G_k with the channels g_ik, i != k, as columns.
    """
    others = [i for i in range(channels.num_users) if i != user]
    return np.column_stack([channels.gain(i, user) for i in others]) if others \
        else np.zeros((channels.units_per_user, 0), dtype=complex)


def projector(cross_channels: ComplexMatrix) -> ComplexMatrix:
    """
    Returns the orthogonal projector onto the orthogonal complement of the column span of G.
    """
    units = cross_channels.shape[0]
    if cross_channels.shape[1] == 0:
        return np.eye(units, dtype=complex)
    norms = np.linalg.norm(cross_channels, axis=0)
    columns = cross_channels[:, norms > 0] / norms[norms > 0]
    if columns.shape[1] == 0:
        return np.eye(units, dtype=complex)
    result = np.eye(units) - columns @ np.linalg.pinv(columns.conj().T @ columns) @ columns.conj().T
    return (result + result.conj().T) / 2


def build_zf_state(channels: ChannelSet, user: int, penalty: float, aux: Optional[ComplexArray] = None) -> ZfState:
    cross = cross_channel_matrix(channels, user)
    zero_forcing = projector(cross)
    if aux is None:
        aux = zero_forcing.conj().T @ _normalized_direct(channels, user)
    return ZfState(projector=zero_forcing, cross_channels=cross, aux=aux, penalty=penalty)


def zf_feasibility(channels: ChannelSet) -> ZfFeasibility:
    magnitudes = np.abs(channels.gains)
    table = 2 * magnitudes.max(axis=2) <= magnitudes.sum(axis=2)
    np.fill_diagonal(table, True)
    return ZfFeasibility(table=table, feasible=bool(np.all(table)))


def zf_objective(direct: ComplexArray, state: ZfState, phases: ComplexArray) -> float:
    """
    Returns Re(g^H Z v) - lambda ||theta - Z v||^2.
    """
    projected = state.projector @ state.aux
    return float(np.real(direct.conj() @ projected) - state.penalty * np.linalg.norm(phases - projected) ** 2)


def zf_phase(channels: ChannelSet, user: int,
             penalty: Optional[float] = None,
             init_seed: Optional[int] = None,
             tol: Optional[float] = None,
             max_iter: Optional[int] = None) -> ZfPhaseResult:
    """
    Alternates theta_n = [Z v]_n / |[Z v]_n| and v = (Z^H Z)^+ (Z^H g / (2 lambda) + Z^H theta) until the objective
    changes by less than tol. Elements with [Z v]_n = 0 keep their previous phase (initially 1).
    The returned phases are rotated such that g_kk^H theta_k is real and nonnegative.
    :param channels: the channels
    :param user: the user k
    :param penalty: the penalty factor lambda
    :param init_seed: seed of a random CN(0, 1) initial v; v = Z^H g if omitted
    :param tol: stopping threshold on the objective change
    :param max_iter: maximum number of iterations
    :return: the phases, the objective after each iteration and the final state
    """
    settings = CONFIG.zero_forcing
    penalty = penalty if penalty is not None else settings.penalty
    tol = tol if tol is not None else settings.tolerance
    max_iter = max_iter if max_iter is not None else settings.max_iter

    direct = _normalized_direct(channels, user)
    aux = None
    if init_seed is not None:
        parts = np.random.default_rng(init_seed).standard_normal((channels.units_per_user, 2))
        aux = np.sqrt(0.5) * (parts[:, 0] + 1j * parts[:, 1])
    state = build_zf_state(channels, user, penalty, aux)
    zero_forcing = state.projector
    inverse = np.linalg.pinv(zero_forcing.conj().T @ zero_forcing)
    bias = zero_forcing.conj().T @ direct / (2 * penalty)

    phases = np.ones(channels.units_per_user, dtype=complex)
    aux = state.aux
    trace: list[float] = []
    iterations = 0
    for iterations in range(1, max_iter + 1):
        projected = zero_forcing @ aux
        magnitudes = np.abs(projected)
        phases = np.divide(projected, magnitudes, out=phases.copy(), where=magnitudes > 0)
        aux = inverse @ (bias + zero_forcing.conj().T @ phases)
        state = ZfState(zero_forcing, state.cross_channels, aux, penalty)
        trace.append(zf_objective(direct, state, phases))
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol:
            break

    alignment = channels.gain(user, user).conj() @ phases
    if alignment != 0:
        phases = phases * np.exp(-1j * np.angle(alignment))
    logger.debug('Zero-forcing phases of user %s after %s iterations, objective %.6g',
                 user, iterations, trace[-1] if trace else float('nan'))
    return ZfPhaseResult(phases=phases, trace=tuple(trace), iterations=iterations, state=state)


def zf_phases(channels: ChannelSet, penalty: Optional[float] = None) -> PhaseBeamformer:
    """
    Designs the zero-forcing phases of all users independently.
    """
    return PhaseBeamformer(np.array([zf_phase(channels, user, penalty).phases
                                     for user in range(channels.num_users)]))


def solve_zf(channels: ChannelSet, config: SystemConfig, penalty: Optional[float] = None) -> BeamformingSolution:
    """
    Designs zero-forcing phases and completes them by power control. A failing nulling condition
    is logged and reported, the design still runs.
    """
    feasibility = zf_feasibility(channels)
    if not feasibility.feasible:
        logger.warning('Exact unit-modulus nulling is impossible for %s user/row pairs',
                       int(np.sum(~feasibility.table)))
    phases = zf_phases(channels, penalty)
    return solve_with_phases(phases, channels, config, Method.ZF,
                             {'nulling_condition': float(feasibility.feasible)})


def _normalized_direct(channels: ChannelSet, user: int) -> ComplexArray:
    direct = channels.gain(user, user)
    norm = np.linalg.norm(direct)
    if norm == 0:
        return direct
    return direct * np.sqrt(channels.units_per_user) / norm
