"""
This module solves `SdpProblem`s with cvxpy. Hermitian blocks enter through their real symmetric
2n x 2n embedding, each tied to a symmetric slack matrix constrained to the PSD cone.
The default back end is the Clarabel interior-point method.
"""
import logging
from typing import Any, Optional

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from ris_power_min import CONFIG
from ris_power_min.cross_section.metrics import event_counting, sdp_solve_counter
from ris_power_min.sdpcore.problem import SdpProblem, SdpSolution, SdpStatus, ConstraintSense, ObjectiveSense

logger = logging.getLogger(__name__)

_STATUSES = {
    cp.OPTIMAL: SdpStatus.OPTIMAL,
    cp.INFEASIBLE: SdpStatus.INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: SdpStatus.INFEASIBLE,
    cp.UNBOUNDED: SdpStatus.UNBOUNDED,
    cp.UNBOUNDED_INACCURATE: SdpStatus.UNBOUNDED,
}


@event_counting(sdp_solve_counter)
def solve(problem: SdpProblem, tol: Optional[float] = None, max_iter: Optional[int] = None) -> SdpSolution:
    """
    Solves the specified semidefinite program.
    :param problem: the problem
    :param tol: gap and feasibility tolerance; defaults to the configured one
    :param max_iter: maximum number of interior-point iterations; defaults to the configured one
    :return: the solution; NumericalFailure if the back end does not converge
    """
    tol = tol if tol is not None else CONFIG.sdp.tolerance
    max_iter = max_iter if max_iter is not None else CONFIG.sdp.max_iter

    x = cp.Variable(problem.num_variables)
    scalar_constraints = _scalar_constraints(problem, x)
    cone_constraints = []
    slacks = []
    for block in problem.lmi_blocks:
        constant, coefficients = block.real_embedding()
        size = constant.shape[0]
        slack = cp.Variable((size, size), symmetric=True)
        affine = cp.reshape(coefficients @ x, (size, size), order='C') + constant
        cone_constraints.append(affine == slack)
        cone_constraints.append(slack >> 0)
        slacks.append(slack)

    objective = problem.objective @ x
    goal = cp.Minimize(objective) if problem.sense == ObjectiveSense.MINIMIZE else cp.Maximize(objective)
    program = cp.Problem(goal, [constraint for constraint, _ in scalar_constraints] + cone_constraints)

    logger.debug('Solving SDP with %s variables, %s scalar constraints and %s LMI blocks',
                 problem.num_variables, len(problem.scalar_constraints), len(problem.lmi_blocks))
    try:
        program.solve(solver=CONFIG.sdp.solver, **_solver_options(CONFIG.sdp.solver, tol, max_iter))
    except cp.error.SolverError as error:
        logger.warning('SDP back end failed: %s', error)
        return SdpSolution.failed(problem.num_variables, SdpStatus.NUMERICAL_FAILURE, str(error))

    iterations = int(program.solver_stats.num_iters or 0) if program.solver_stats else 0
    status = _STATUSES.get(program.status, SdpStatus.NUMERICAL_FAILURE)
    if status != SdpStatus.OPTIMAL and program.status != cp.OPTIMAL_INACCURATE:
        logger.info('SDP finished with status %s after %s iterations', program.status, iterations)
        return SdpSolution.failed(problem.num_variables, status, str(program.status), iterations)

    internal = np.asarray(x.value, dtype=float)
    residuals = {
        'primal': problem.primal_residual(internal),
        'dual': _dual_residual(scalar_constraints, cone_constraints),
        'gap': _complementarity(scalar_constraints, slacks, cone_constraints, float(program.value)),
    }
    if program.status == cp.OPTIMAL_INACCURATE:
        if residuals['primal'] > np.sqrt(tol):
            logger.warning('Inaccurate SDP solution rejected, residuals %s', residuals)
            return SdpSolution.failed(problem.num_variables, SdpStatus.NUMERICAL_FAILURE,
                                      str(program.status), iterations)
        logger.warning('Accepting inaccurate SDP solution, residuals %s', residuals)

    return SdpSolution(values=problem.scales * internal,
                       objective_value=float(problem.objective @ internal),
                       status=SdpStatus.OPTIMAL,
                       residuals=residuals,
                       iterations=iterations,
                       certificate=str(program.status))


def _solver_options(solver: str, tol: float, max_iter: int) -> dict[str, Any]:
    if solver == cp.CLARABEL:
        return {'max_iter': max_iter, 'tol_gap_abs': tol, 'tol_gap_rel': tol, 'tol_feas': tol}
    if solver == cp.SCS:
        return {'max_iters': max_iter, 'eps': tol}
    return {}


def _scalar_constraints(problem: SdpProblem, x: cp.Variable) -> list[tuple[Any, ConstraintSense]]:
    """
    Groups the scalar constraints by sense into one sparse row block each.
    """
    result = []
    for sense in ConstraintSense:
        group = [constraint for constraint in problem.scalar_constraints if constraint.sense == sense]
        if not group:
            continue
        rows = np.concatenate([np.full(len(constraint.indices), row) for row, constraint in enumerate(group)])
        cols = np.concatenate([constraint.indices for constraint in group])
        data = np.concatenate([constraint.coefficients for constraint in group])
        matrix = sp.csr_matrix((data, (rows, cols)), shape=(len(group), problem.num_variables))
        bounds = np.array([constraint.bound for constraint in group])
        if sense == ConstraintSense.LESS_EQUAL:
            result.append((matrix @ x <= bounds, sense))
        elif sense == ConstraintSense.GREATER_EQUAL:
            result.append((matrix @ x >= bounds, sense))
        else:
            result.append((matrix @ x == bounds, sense))
    return result


def _dual_residual(scalar_constraints: list[tuple[Any, ConstraintSense]], cone_constraints: list[Any]) -> float:
    """
    Returns the largest violation of the dual cones: negative inequality multipliers and
    negative eigenvalues of the PSD multipliers, relative to the multiplier magnitude.
    """
    violations = [0.0]
    for constraint, sense in scalar_constraints:
        if sense != ConstraintSense.EQUAL and constraint.dual_value is not None:
            duals = np.atleast_1d(constraint.dual_value)
            violations.append(max(0.0, -float(duals.min())) / max(1.0, float(np.abs(duals).max())))
    for constraint in cone_constraints[1::2]:
        if constraint.dual_value is not None:
            eigenvalues = np.linalg.eigvalsh(constraint.dual_value)
            violations.append(max(0.0, -float(eigenvalues[0])) / max(1.0, float(np.abs(eigenvalues).max())))
    return max(violations)


def _complementarity(scalar_constraints: list[tuple[Any, ConstraintSense]], slacks: list[cp.Variable],
                     cone_constraints: list[Any], objective: float) -> float:
    """
    Returns sum |y_i s_i| + sum |<Z_b, S_b>| relative to the objective magnitude.
    """
    total = 0.0
    for constraint, sense in scalar_constraints:
        if sense == ConstraintSense.EQUAL or constraint.dual_value is None:
            continue
        # cvxpy stores every inequality as args[0] <= args[1]
        slack = np.asarray(constraint.args[1].value) - np.asarray(constraint.args[0].value)
        total += float(np.sum(np.abs(np.atleast_1d(constraint.dual_value) * slack)))
    for slack, constraint in zip(slacks, cone_constraints[1::2]):
        if constraint.dual_value is not None and slack.value is not None:
            total += abs(float(np.sum(constraint.dual_value * slack.value)))
    return total / (1 + abs(objective))
