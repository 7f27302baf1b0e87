"""
Received power of a single user served by an N-element RIS with Rayleigh channels g ~ CN(0, rho I).

With all phases equal to one the average received power is N rho P0, linear in N. With phases aligned to
the channel it is P0 E(sum_n |g_n|)^2 = P0 (N rho + N (N - 1) pi rho / 4), quadratic in N.

Monte Carlo trials are drawn in chunks of the configured chunk size from a single default_rng(seed),
consumed in order. Each chunk draws standard_normal((chunk, N, 2)) scaled by sqrt(rho / 2).
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from statsmodels.stats.weightstats import DescrStatsW

from ris_power_min import CONFIG
from ris_power_min.util.types import FloatingArray

logger = logging.getLogger(__name__)


class ScalingMode(str, Enum):
    ALL_ONES = 'AllOnes'
    MRT = 'Mrt'


@dataclass(frozen=True)
class ScalingEstimate:
    mean_w: float
    std_error_w: float
    trials: int


def _check(units: int, variance: float, power: float) -> None:
    if units < 1:
        raise ValueError(f'At least one RIS element is required, got {units}')
    if not variance > 0 or not power > 0:
        raise ValueError(f'Variance and power must be positive, got {variance} and {power}')


def received_powers(units: int, variance: float, power: float, mode: ScalingMode, trials: int,
                    seed: int, chunk_size: Optional[int] = None) -> FloatingArray:
    """
    Returns P0 |g^H theta|^2 of every trial. The chunks consume one generator in order, so the
    draws do not depend on the chunk size.
    """
    _check(units, variance, power)
    if trials < 1:
        raise ValueError(f'At least one trial is required, got {trials}')
    chunk_size = chunk_size if chunk_size is not None else CONFIG.scaling.chunk_size

    sizes = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]
    rng = np.random.default_rng(seed)
    values = []
    for size in sizes:
        draw = rng.standard_normal((size, units, 2)) * np.sqrt(variance / 2)
        gains = draw[..., 0] + 1j * draw[..., 1]
        if mode == ScalingMode.ALL_ONES:
            values.append(np.abs(np.sum(gains, axis=1)) ** 2)
        else:
            values.append(np.sum(np.abs(gains), axis=1) ** 2)
    return power * np.concatenate(values)


def scaling_law_trial(units: int, variance: float, power: float, mode: ScalingMode, trials: int,
                      seed: int = 0, chunk_size: Optional[int] = None) -> ScalingEstimate:
    """
    Estimates the average received power and its standard error by Monte Carlo.
    :param units: number of RIS elements N
    :param variance: channel variance rho
    :param power: transmit power P0 in watts
    :param mode: phases all equal to one or aligned to the channel
    :param trials: number of channel draws
    :param seed: seed of the draws
    :param chunk_size: number of draws per chunk, defaults to the configured one
    """
    statistics = DescrStatsW(received_powers(units, variance, power, mode, trials, seed, chunk_size))
    logger.debug('Scaling law estimate for N=%s %s: %s +- %s', units, mode.value, statistics.mean,
                 statistics.std_mean)
    return ScalingEstimate(float(statistics.mean), float(statistics.std_mean), trials)


def scaling_law_exact(units: int, variance: float, power: float, mode: ScalingMode) -> float:
    _check(units, variance, power)
    if mode == ScalingMode.ALL_ONES:
        return units * variance * power
    return power * (units * variance + units * (units - 1) * math.pi * variance / 4)


def printed_mrt_constant(units: int, variance: float, power: float) -> float:
    """
    Returns the asymptotic value (pi^2 - 7 pi + 16) / 4 N^2 rho P0 as it is quoted for aligned phases.
    It disagrees with the moments of the Rayleigh distribution, which give pi / 4 N^2 rho P0.
    """
    _check(units, variance, power)
    return (math.pi ** 2 - 7 * math.pi + 16) / 4 * units ** 2 * variance * power


def scaling_law_report(units: Union[int, Sequence[int]], variance: float = 1.0, power: float = 1.0,
                       trials: int = 100_000, seed: int = 0) -> pd.DataFrame:
    """
    Tabulates exact, quoted asymptotic and Monte Carlo received power for both phase choices.
    """
    units = [units] if isinstance(units, int) else list(units)
    rows = []
    for count in units:
        for mode in ScalingMode:
            estimate = scaling_law_trial(count, variance, power, mode, trials, seed)
            quoted = printed_mrt_constant(count, variance, power) if mode == ScalingMode.MRT \
                else scaling_law_exact(count, variance, power, mode)
            rows.append({'N': count,
                         'mode': mode.value,
                         'exact_w': scaling_law_exact(count, variance, power, mode),
                         'quoted_w': quoted,
                         'monte_carlo_w': estimate.mean_w,
                         'std_error_w': estimate.std_error_w})
    return pd.DataFrame(rows, columns=['N', 'mode', 'exact_w', 'quoted_w', 'monte_carlo_w', 'std_error_w'])


def fit_scaling_exponent(units: Sequence[float], powers: Sequence[float]) -> float:
    """
    Returns the least-squares slope of log(power) over log(N).
    """
    units, powers = np.asarray(units, dtype=float), np.asarray(powers, dtype=float)
    if len(units) != len(powers) or len(units) < 2:
        raise ValueError('At least two matching points are required to fit an exponent.')
    if np.any(units <= 0) or np.any(powers <= 0):
        raise ValueError('Points must be positive to fit an exponent.')
    slope, _ = np.polyfit(np.log(units), np.log(powers), 1)
    return float(slope)
