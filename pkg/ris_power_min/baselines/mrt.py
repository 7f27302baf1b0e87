import logging

import numpy as np

from ris_power_min.model.constants import Method
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.baselines.completion import solve_with_phases

logger = logging.getLogger(__name__)


def mrt_phase(channels: ChannelSet) -> PhaseBeamformer:
    """
    Aligns every element to its direct channel, theta_kn = [g_kk]_n / |[g_kk]_n|, so that
    g_kk^H theta_k = sum_n |[g_kk]_n|. Elements with a zero channel get phase 1.
    """
    direct = channels.direct()
    magnitudes = np.abs(direct)
    zero = magnitudes == 0
    if np.any(zero):
        logger.warning('%s direct channel entries are zero; their phases are set to 1', int(zero.sum()))
    phases = np.divide(direct, magnitudes, out=np.ones_like(direct), where=~zero)
    return PhaseBeamformer(phases)


def solve_mrt(channels: ChannelSet, config: SystemConfig) -> BeamformingSolution:
    return solve_with_phases(mrt_phase(channels), channels, config, Method.MRT)
