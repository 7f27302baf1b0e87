"""
This module evaluates received powers, SINRs and cross-user leakage for given phases and powers.
"""
import numpy as np

from ris_power_min.cross_section.exceptions import DimensionMismatchError
from ris_power_min.model.data import ChannelSet, PhaseBeamformer, PowerAllocation
from ris_power_min.util.types import FloatingArray, FloatingMatrix, ComplexMatrix


def inner_products(channels: ChannelSet, phases: PhaseBeamformer) -> ComplexMatrix:
    """
    Returns the K x K matrix with entry (k, i) = g_ki^H theta_i.
    """
    if (channels.num_users, channels.units_per_user) != (phases.num_users, phases.units_per_user):
        raise DimensionMismatchError(f'Phases of size {phases.values.shape} do not match channels '
                                     f'(K={channels.num_users}, N={channels.units_per_user})')
    return np.einsum('kin,in->ki', channels.gains.conj(), phases.values)


def effective_gains(channels: ChannelSet, phases: PhaseBeamformer) -> FloatingMatrix:
    """
    Returns the K x K matrix of power gains |g_ki^H theta_i|^2; the diagonal holds the direct gains.
    """
    return np.abs(inner_products(channels, phases)) ** 2


def sinr(channels: ChannelSet, phases: PhaseBeamformer, powers: PowerAllocation, noise_power: float) -> FloatingArray:
    """
    Calculates the SINR of every user:
    gamma_k = p_k |g_kk^H theta_k|^2 / (sum_{i != k} p_i |g_ki^H theta_i|^2 + sigma^2).
    :param channels: the channel grid
    :param phases: the phase beamformer
    :param powers: the transmit powers
    :param noise_power: the noise power sigma^2 in watts
    :return: the linear SINR per user
    """
    if not noise_power > 0:
        raise ValueError(f'Noise power must be positive: {noise_power}')
    if len(powers) != channels.num_users:
        raise DimensionMismatchError(f'Expected {channels.num_users} powers, got {len(powers)}')

    received = effective_gains(channels, phases) * powers.values[np.newaxis, :]
    signal = np.diag(received).copy()
    np.fill_diagonal(received, 0.0)
    return signal / (received.sum(axis=1) + noise_power)


def leakage(channels: ChannelSet, phases: PhaseBeamformer) -> FloatingMatrix:
    """
    Returns the K x K matrix with entry (k, i) = |g_ki^H theta_i| for i != k and zero on the diagonal,
    i.e. the amplitude row i leaks to user k.
    """
    result = np.abs(inner_products(channels, phases))
    np.fill_diagonal(result, 0.0)
    return result


def max_leakage(channels: ChannelSet, phases: PhaseBeamformer) -> float:
    """
    Returns the largest cross-user leakage normalized by its coherent bound sum_n |[g_ki]_n|, a value in [0, 1].
    """
    if channels.num_users == 1:
        return 0.0
    bound = np.abs(channels.gains).sum(axis=2)
    np.fill_diagonal(bound, 1.0)
    ratio = np.divide(leakage(channels, phases), bound, out=np.zeros_like(bound), where=bound > 0)
    return float(ratio.max())
