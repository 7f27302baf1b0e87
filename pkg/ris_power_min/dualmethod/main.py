"""
The dual method end to end: solve the dual SDP, recover phases from the multipliers, run power control
and measure the duality gap.
"""
import dataclasses
import logging
from typing import Optional

import numpy as np

from ris_power_min import CONFIG
from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.cross_section.exceptions import DegenerateChannelError, DegenerateRecoveryError
from ris_power_min.dualmethod.recovery import DualSolution, recover_directions, closed_form_vectors, \
    project_directions
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.powerctl.gains import build_gain_table
from ris_power_min.powerctl.iteration import fixed_point
from ris_power_min.sdpcore.assembly import assemble_dual_problem
from ris_power_min.sdpcore.problem import SdpStatus
from ris_power_min.sdpcore.solver import solve

logger = logging.getLogger(__name__)


def solve_dual_method(channels: ChannelSet,
                      config: SystemConfig,
                      tol: Optional[float] = None,
                      max_iter: Optional[int] = None) -> BeamformingSolution:
    """
    Runs the dual method on the specified channels.
    The solution is Optimal if its relative duality gap (sum p - sum alpha sigma^2) / sum p is below the
    configured threshold, Feasible otherwise. Infeasibility of the SDP or of the power control yields an
    Infeasible solution; a failing SDP solve yields NumericalFailure.
    :param channels: the channels
    :param config: the system configuration
    :param tol: SDP tolerance
    :param max_iter: SDP iteration limit
    :return: the solution with diagnostics duality_gap_rel, dual_objective_w, sdp_iterations, iterations and
             the power and modulus deviation of the norm-sqrt(N) closed-form vectors
    """
    channels.check(config)
    logger.info('Solving dual method for K=%s, N=%s', config.num_users, config.units_per_user)

    try:
        problem = assemble_dual_problem(channels, config.targets, config.noise_power_w)
    except DegenerateChannelError as error:
        logger.info('Dual method cannot serve user %s', error.user)
        return BeamformingSolution.failed(Method.DM, SolutionStatus.INFEASIBLE)
    sdp = solve(problem, tol, max_iter)
    diagnostics = {'sdp_iterations': float(sdp.iterations)}
    diagnostics.update({f'sdp_{name}_residual': value for name, value in sdp.residuals.items()})
    if sdp.status == SdpStatus.NUMERICAL_FAILURE:
        return BeamformingSolution.failed(Method.DM, SolutionStatus.NUMERICAL_FAILURE, diagnostics=diagnostics)
    if sdp.status != SdpStatus.OPTIMAL:
        logger.info('Dual SDP reports %s: the SINR targets cannot be met', sdp.status.value)
        return BeamformingSolution.failed(Method.DM, SolutionStatus.INFEASIBLE, diagnostics=diagnostics)

    dual = DualSolution.from_sdp(sdp, config.num_users, config.units_per_user, config.noise_power_w)
    try:
        dual.check()
    except ValueError as error:
        logger.warning('Dual solution is inaccurate: %s', error)
    diagnostics['dual_objective_w'] = dual.dual_objective_w

    directions = recover_directions(dual, channels)
    try:
        phases = project_directions(directions)
    except DegenerateRecoveryError as error:
        logger.warning('%s', error)
        return BeamformingSolution.failed(Method.DM, SolutionStatus.NUMERICAL_FAILURE, diagnostics=diagnostics)
    diagnostics.update(_closed_form_diagnostics(directions, channels, config))

    solution = solve_with_phases(phases, channels, config, Method.DM, diagnostics)
    if not solution.is_feasible:
        return solution

    gap = (solution.sum_power_w - dual.dual_objective_w) / solution.sum_power_w
    status = SolutionStatus.OPTIMAL if gap <= CONFIG.dual_method.optimal_gap else SolutionStatus.FEASIBLE
    logger.info('Dual method: sum power %.6e W, relative duality gap %.3e', solution.sum_power_w, gap)
    return dataclasses.replace(solution, status=status, diagnostics={**solution.diagnostics, 'duality_gap_rel': gap})


def _closed_form_diagnostics(directions: np.ndarray, channels: ChannelSet, config: SystemConfig) -> dict[str, float]:
    """
    Evaluates the norm-sqrt(N) vectors of the closed form as they are, i.e. without unit modulus per element.
    """
    vectors = closed_form_vectors(directions)
    result = {'closed_form_max_modulus_deviation': float(np.max(np.abs(np.abs(vectors) - 1))),
              'closed_form_sum_power_w': float('nan')}
    try:
        power_control = fixed_point(build_gain_table(channels, PhaseBeamformer(vectors, check=False)),
                                    config.targets, config.noise_power_w)
    except DegenerateChannelError:
        return result
    if power_control.feasible:
        result['closed_form_sum_power_w'] = power_control.powers.total
    return result
