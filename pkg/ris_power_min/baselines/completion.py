"""
This module completes a phase beamformer to a beamforming solution by power control.
"""
import logging
from typing import Optional

from ris_power_min.cross_section.exceptions import DegenerateChannelError
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.model.sinr import sinr, max_leakage
from ris_power_min.powerctl.gains import build_gain_table
from ris_power_min.powerctl.iteration import fixed_point

logger = logging.getLogger(__name__)


def solve_with_phases(phases: PhaseBeamformer,
                      channels: ChannelSet,
                      config: SystemConfig,
                      method: Method = Method.MRT,
                      diagnostics: Optional[dict[str, float]] = None) -> BeamformingSolution:
    """
    Runs the fixed-point power control on the specified phases and packages the result.
    :param phases: the phase beamformer
    :param channels: the channels
    :param config: the system configuration holding targets and noise power
    :param method: the method to report
    :param diagnostics: additional diagnostics to report
    :return: a Feasible solution or an Infeasible one without powers
    """
    channels.check(config)
    diagnostics = dict(diagnostics or {})
    diagnostics['max_leakage'] = max_leakage(channels, phases)

    table = build_gain_table(channels, phases)
    try:
        result = fixed_point(table, config.targets, config.noise_power_w)
    except DegenerateChannelError as error:
        logger.info('%s phases cannot serve user %s', method.value, error.user)
        return BeamformingSolution.failed(method, SolutionStatus.INFEASIBLE, phases, diagnostics)

    diagnostics['iterations'] = float(result.iterations)
    if not result.feasible:
        logger.info('Power control for %s phases is infeasible: %s', method.value, result.reason)
        return BeamformingSolution.failed(method, SolutionStatus.INFEASIBLE, phases, diagnostics)

    return BeamformingSolution(method=method,
                               status=SolutionStatus.FEASIBLE,
                               phases=phases,
                               powers=result.powers,
                               sinrs=sinr(channels, phases, result.powers, config.noise_power_w),
                               diagnostics=diagnostics)
