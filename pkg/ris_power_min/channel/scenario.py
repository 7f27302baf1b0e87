"""
This module generates seeded channel realizations and the network geometry.

Random numbers come from numpy's PCG64 generator (`numpy.random.default_rng(seed)`) and are drawn in this order:
1. user positions, K x 2 uniform values in [-side/2, side/2), user by user, x before y;
2. small-scale fading, K x K x N x 2 standard normal values in row-major order (user k, row i, element n,
   real part before imaginary part), scaled by sqrt(rho / 2).
Drawing users one at a time in this order yields the same values as drawing in bulk.
"""
import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat
from typing_extensions import Self

from ris_power_min.model.constants import PATHLOSS_AT_ONE_METER, MIN_DISTANCE_M, DeploymentKind
from ris_power_min.model.data import SystemConfig, ChannelSet
from ris_power_min.util.types import ComplexArray, FloatingMatrix

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64


class ScenarioSpec(BaseModel):
    """
    Everything needed to reproduce one channel realization.

    Attributes
    ----------
    config: the system configuration
    seed: seed of the PCG64 generator
    fading_variance: per-entry variance rho of the complex Gaussian small-scale fading
    """
    model_config = ConfigDict(frozen=True)

    config: SystemConfig = SystemConfig()
    seed: int = Field(default=0, ge=0, lt=MAX_SEED)
    fading_variance: PositiveFloat = 1.0

    @classmethod
    def create(cls, config: SystemConfig, seed: int, fading_variance: float = 1.0) -> Self:
        return cls(config=config, seed=seed, fading_variance=fading_variance)


@dataclass(frozen=True)
class Scenario:
    """
    A generated channel realization with its geometry (positions in meters, transmitter at the origin).
    """
    spec: ScenarioSpec
    channels: ChannelSet
    user_positions: FloatingMatrix
    ris_positions: FloatingMatrix


def pathloss(distance_m: np.ndarray, exponent: float) -> np.ndarray:
    """
    Large-scale pathloss 10^-3.76 d^-alpha with d clamped to the minimum distance.
    """
    distance = np.maximum(np.asarray(distance_m, dtype=float), MIN_DISTANCE_M)
    return PATHLOSS_AT_ONE_METER * distance ** (-exponent)


def ris_row_positions(config: SystemConfig) -> FloatingMatrix:
    """
    Returns the K x 2 positions of the RIS rows. Distributed row i sits at (cos(2 i pi / K), sin(2 i pi / K)) * radius.
    """
    num_users = config.num_users
    if config.deployment.kind == DeploymentKind.CENTRALIZED:
        return np.zeros((num_users, 2))
    angles = 2 * np.pi * np.arange(num_users) / num_users
    return config.deployment.radius_m * np.column_stack((np.cos(angles), np.sin(angles)))


def draw_user_positions(rng: np.random.Generator, config: SystemConfig) -> FloatingMatrix:
    half_side = config.area_side_m / 2
    return rng.uniform(-half_side, half_side, size=(config.num_users, 2))


def draw_fading(rng: np.random.Generator, shape: tuple[int, ...], variance: float) -> np.ndarray:
    """
    Draws CN(0, variance) values of the specified shape, real part before imaginary part per value.
    """
    parts = rng.standard_normal(shape + (2,))
    return np.sqrt(variance / 2) * (parts[..., 0] + 1j * parts[..., 1])


def generate_scenario(spec: ScenarioSpec) -> Scenario:
    """
    Generates users uniformly in the square area around the transmitter and the channels
    g_ki = sqrt(pathloss(d_ki)) h with h ~ CN(0, rho), d_ki measured from RIS row i to user k.
    :param spec: the scenario specification
    :return: the scenario; bit-identical for identical specifications
    """
    config = spec.config
    rng = np.random.default_rng(spec.seed)

    users = draw_user_positions(rng, config)
    fading = draw_fading(rng, (config.num_users, config.num_users, config.units_per_user), spec.fading_variance)

    rows = ris_row_positions(config)
    distances = np.linalg.norm(users[:, np.newaxis, :] - rows[np.newaxis, :, :], axis=2)
    amplitudes = np.sqrt(pathloss(distances, config.pathloss_exponent))
    channels = ChannelSet(amplitudes[:, :, np.newaxis] * fading)

    logger.debug('Generated scenario with seed %s: K=%s, N=%s, %s deployment',
                 spec.seed, config.num_users, config.units_per_user, config.deployment.kind.value)
    return Scenario(spec=spec, channels=channels, user_positions=users, ris_positions=rows)


def raw_fading(count: int, variance: float, seed: int) -> ComplexArray:
    """
    Returns `count` i.i.d. CN(0, variance) samples, deterministic per seed.
    """
    if count < 1:
        raise ValueError(f'Number of samples must be positive: {count}')
    if not variance > 0:
        raise ValueError(f'Variance must be positive: {variance}')
    return draw_fading(np.random.default_rng(seed), (count,), variance)
