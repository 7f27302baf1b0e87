"""
This module computes the minimal powers meeting all SINR targets with equality for fixed phases,
either by the fixed-point iteration p <- f(p) from zero or by a direct linear solve of (I - DC) p = D sigma^2 1.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ris_power_min import CONFIG
from ris_power_min.model.data import PowerAllocation
from ris_power_min.powerctl.gains import GainTable
from ris_power_min.util.types import FloatingArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerControlResult:
    """
    Outcome of a power control run.

    Attributes
    ----------
    feasible: whether a finite power vector meeting all targets exists and was found
    powers: the powers if feasible
    iterations: number of fixed-point iterations (zero for the direct solve)
    trace: sum power after each iteration
    reason: why the run was declared infeasible
    """
    feasible: bool
    powers: Optional[PowerAllocation] = None
    iterations: int = 0
    trace: tuple[float, ...] = field(default_factory=tuple)
    reason: str = ''


def fixed_point(table: GainTable, targets: FloatingArray, noise_power: float,
                epsilon: Optional[float] = None,
                max_iter: Optional[int] = None,
                sum_power_cap: Optional[float] = None,
                relative_tolerance: Optional[float] = None) -> PowerControlResult:
    """
    Iterates p(t) = f(p(t-1)) from p(0) = 0 until ||p - f(p)|| < epsilon and every
    |p_k - f_k(p)| / f_k(p) < relative_tolerance. The SINR of user k at the returned p is
    Gamma_k p_k / f_k(p), so the second rule bounds its relative shortfall below the target.
    The run is infeasible if the sum power exceeds the cap or the iteration limit is reached.
    """
    settings = CONFIG.power_control
    epsilon = epsilon if epsilon is not None else settings.epsilon
    max_iter = max_iter if max_iter is not None else settings.max_iter
    sum_power_cap = sum_power_cap if sum_power_cap is not None else settings.sum_power_cap
    relative_tolerance = relative_tolerance if relative_tolerance is not None else settings.relative_tolerance

    ratios, cross = table.normalized(targets)
    trace = []
    mapped = ratios * noise_power
    for iteration in range(1, max_iter + 1):
        powers = mapped
        trace.append(float(powers.sum()))
        if not np.isfinite(trace[-1]) or trace[-1] > sum_power_cap:
            logger.debug('Power iteration diverged after %s iterations', iteration)
            return PowerControlResult(False, iterations=iteration, trace=tuple(trace), reason='sum power cap exceeded')

        mapped = ratios * (cross @ powers + noise_power)
        residual = np.abs(mapped - powers)
        if np.linalg.norm(residual) < epsilon and np.max(residual / mapped) < relative_tolerance:
            logger.debug('Power iteration converged after %s iterations to %.6e W', iteration, trace[-1])
            return PowerControlResult(True, PowerAllocation(powers), iteration, tuple(trace))

    logger.debug('Power iteration did not converge within %s iterations', max_iter)
    return PowerControlResult(False, iterations=max_iter, trace=tuple(trace), reason='iteration limit reached')


def direct_solve(table: GainTable, targets: FloatingArray, noise_power: float,
                 spectral_radius_margin: Optional[float] = None) -> PowerControlResult:
    """
    Solves (I - DC) p = D sigma^2 1 directly. Infeasible if the spectral radius of DC is at least
    1 - margin, if the system is singular or if a power comes out negative.
    """
    margin = spectral_radius_margin if spectral_radius_margin is not None \
        else CONFIG.power_control.spectral_radius_margin
    ratios, cross = table.normalized(targets)
    system = ratios[:, np.newaxis] * cross

    radius = float(np.max(np.abs(np.linalg.eigvals(system)))) if table.num_users > 1 else 0.0
    if radius >= 1 - margin:
        return PowerControlResult(False, reason=f'spectral radius {radius:.6g} of DC is not below one')
    try:
        powers = np.linalg.solve(np.eye(table.num_users) - system, ratios * noise_power)
    except np.linalg.LinAlgError:
        return PowerControlResult(False, reason='singular system')
    if not np.all(np.isfinite(powers)) or np.any(powers < 0):
        return PowerControlResult(False, reason='negative powers')
    return PowerControlResult(True, PowerAllocation(powers), 0, (float(powers.sum()),))
