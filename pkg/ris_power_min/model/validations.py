"""
This module checks beamforming solutions against the constraints of the power minimization problem.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ris_power_min import CONFIG
from ris_power_min.model.data import BeamformingSolution, ChannelSet, SystemConfig
from ris_power_min.model.sinr import sinr

logger = logging.getLogger(__name__)

DIMENSIONS = 'dimensions'
UNIT_MODULUS = 'unit_modulus'
SINR = 'sinr'
NONNEGATIVE_POWERS = 'nonnegative_powers'
SUM_POWER = 'sum_power'


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    """
    Named pass/fail checks with residuals.
    """
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def __getitem__(self, name: str) -> ValidationCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def __repr__(self) -> str:
        return ', '.join(f'{check.name}={"ok" if check.passed else "FAIL"}({check.residual:.3g})'
                         for check in self.checks)


def validate(solution: BeamformingSolution,
             config: SystemConfig,
             channels: ChannelSet,
             tol: Optional[float] = None) -> ValidationReport:
    """
    Checks the unit-modulus constraint, the SINR constraints and the nonnegativity of the powers of a solution.
    The SINRs are re-evaluated from the channels, not taken from the solution.
    :param solution: the solution to check
    :param config: the system configuration holding targets and noise power
    :param channels: the channels the solution was computed for
    :param tol: relative SINR tolerance; defaults to the configured one
    :return: the report; never raises
    """
    if tol is None:
        tol = CONFIG.validation.sinr_tolerance
    phases, powers = solution.phases, solution.powers
    if phases is None or powers is None:
        return ValidationReport((ValidationCheck(DIMENSIONS, False, float('nan')),))

    expected = (config.num_users, config.units_per_user)
    consistent = (channels.num_users, channels.units_per_user) == expected \
        and (phases.num_users, phases.units_per_user) == expected and len(powers) == config.num_users
    if not consistent:
        return ValidationReport((ValidationCheck(DIMENSIONS, False, float('nan')),))

    modulus_residual = phases.max_modulus_deviation()
    achieved = sinr(channels, phases, powers, config.noise_power_w)
    targets = config.targets
    slack = achieved - targets
    power_minimum = float(np.min(powers.values))
    sum_residual = abs(solution.sum_power_w - float(np.sum(powers.values)))

    report = ValidationReport((
        ValidationCheck(DIMENSIONS, True, 0.0),
        ValidationCheck(UNIT_MODULUS, modulus_residual <= CONFIG.validation.unit_modulus_tolerance, modulus_residual),
        ValidationCheck(SINR, bool(np.all(slack >= -tol * targets)), float(np.min(slack))),
        ValidationCheck(NONNEGATIVE_POWERS, power_minimum >= 0, power_minimum),
        ValidationCheck(SUM_POWER, sum_residual <= 1e-12 * max(1.0, solution.sum_power_w), sum_residual),
    ))
    if not report.passed:
        logger.debug('Validation of %s solution failed: %s', solution.method.value, report)
    return report
