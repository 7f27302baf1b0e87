from typing import Callable

import numpy as np
import pytest

from ris_power_min.model.data import ChannelSet, SystemConfig


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line('markers', 'slow: acceptance checks solving many semidefinite programs')


def complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    parts = rng.standard_normal(shape + (2,))
    return (parts[..., 0] + 1j * parts[..., 1]) / np.sqrt(2)


@pytest.fixture
def random_channels() -> Callable[..., ChannelSet]:
    """
    Returns a factory of CN(0, 1) channel grids with unit noise power in mind.
    """

    def create(num_users: int, units: int, seed: int = 0) -> ChannelSet:
        return ChannelSet(complex_normal(np.random.default_rng(seed), (num_users, num_users, units)))

    return create


@pytest.fixture
def single_user() -> tuple[ChannelSet, SystemConfig]:
    """
    K=1, N=2, g=[1, 1], Gamma=2, sigma^2=1: the optimum is theta=[1, 1] and p=0.5.
    """
    return ChannelSet([[[1.0, 1.0]]]), SystemConfig.create(1, 2, 2.0, noise_power_w=1.0)


def unit_noise_config(num_users: int, units: int, target: float = 2.0) -> SystemConfig:
    return SystemConfig.create(num_users, units, target, noise_power_w=1.0)
