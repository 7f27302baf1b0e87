import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from pydantic import ValidationError

from ris_power_min.cross_section.exceptions import DimensionMismatchError
from ris_power_min.model.constants import DEFAULT_SINR_TARGET, Method, SolutionStatus
from ris_power_min.model.data import BeamformingSolution, ChannelSet, PhaseBeamformer, PowerAllocation, SystemConfig
from ris_power_min.model.sinr import effective_gains, leakage, max_leakage, sinr
from ris_power_min.model.validations import validate, SINR, UNIT_MODULUS
from tests.conftest import unit_noise_config


class TestSystemConfig:

    def test_default_targets(self):
        config = SystemConfig(num_users=3, units_per_user=4)
        assert config.sinr_targets == (DEFAULT_SINR_TARGET,) * 3
        assert_array_equal(config.targets, [2.0, 2.0, 2.0])

    def test_target_count_must_match(self):
        with pytest.raises(ValidationError):
            SystemConfig(num_users=2, units_per_user=4, sinr_targets=(1.0,))

    def test_rejects_nonpositive_values(self):
        with pytest.raises(ValidationError):
            SystemConfig.create(2, 4, noise_power_w=0.0)
        with pytest.raises(ValidationError):
            SystemConfig.create(0, 4)

    def test_frozen(self):
        config = SystemConfig.create(2, 4)
        with pytest.raises(ValidationError):
            config.num_users = 3


class TestValueTypes:

    def test_channel_shape(self):
        with pytest.raises(DimensionMismatchError):
            ChannelSet(np.ones((2, 3, 4)))
        with pytest.raises(ValueError):
            ChannelSet(np.full((1, 1, 2), np.nan))

    def test_channels_are_read_only(self):
        channels = ChannelSet(np.ones((2, 2, 3)))
        with pytest.raises(ValueError):
            channels.gains[0, 0, 0] = 2

    def test_channel_accessors(self, random_channels):
        channels = random_channels(3, 4)
        assert_array_equal(channels.gain(2, 1), channels.gains[2, 1])
        assert_array_equal(channels.direct()[1], channels.gains[1, 1])
        assert len(channels) == 3
        with pytest.raises(DimensionMismatchError):
            channels.check(unit_noise_config(3, 5))

    def test_unit_modulus_enforced(self):
        with pytest.raises(ValueError):
            PhaseBeamformer([[1.0, 0.5]])
        phases = PhaseBeamformer([[1.0, 0.5]], check=False)
        assert_allclose(phases.max_modulus_deviation(), 0.5)

    def test_from_angles(self):
        phases = PhaseBeamformer.from_angles([[0.0, np.pi / 2]])
        assert_allclose(phases.values, [[1.0, 1j]], atol=1e-15)

    def test_powers_nonnegative(self):
        with pytest.raises(ValueError):
            PowerAllocation([1.0, -1e-3])
        assert PowerAllocation([0.25, 0.5]).total == 0.75

    def test_feasible_solution_needs_powers(self):
        with pytest.raises(ValueError):
            BeamformingSolution(method=Method.MRT, status=SolutionStatus.FEASIBLE)
        failed = BeamformingSolution.failed(Method.ZF, SolutionStatus.INFEASIBLE)
        assert not failed.is_feasible
        assert np.isnan(failed.sum_power_w)


class TestSinr:

    def test_single_user(self):
        channels = ChannelSet([[[1.0, 1.0]]])
        result = sinr(channels, PhaseBeamformer.ones(1, 2), PowerAllocation([4.0]), 1.0)
        assert_allclose(result, [16.0])

    def test_symmetric_interference(self):
        channels = ChannelSet(np.ones((2, 2, 1)))
        result = sinr(channels, PhaseBeamformer.ones(2, 1), PowerAllocation([2.0, 2.0]), 1.0)
        assert_allclose(result, [2 / 3, 2 / 3])

    def test_matches_explicit_evaluation(self, random_channels):
        channels = random_channels(2, 2, seed=7)
        rng = np.random.default_rng(8)
        phases = PhaseBeamformer.from_angles(rng.uniform(0, 2 * np.pi, (2, 2)))
        powers = PowerAllocation(rng.uniform(0.1, 1.0, 2))
        expected = []
        for k in range(2):
            signal = powers.values[k] * abs(np.vdot(channels.gain(k, k), phases.vector(k))) ** 2
            interference = sum(powers.values[i] * abs(np.vdot(channels.gain(k, i), phases.vector(i))) ** 2
                               for i in range(2) if i != k)
            expected.append(signal / (interference + 0.3))
        assert_allclose(sinr(channels, phases, powers, 0.3), expected, rtol=1e-12)

    def test_homogeneous_in_powers_and_noise(self, random_channels):
        channels = random_channels(3, 4, seed=9)
        rng = np.random.default_rng(10)
        phases = PhaseBeamformer.from_angles(rng.uniform(0, 2 * np.pi, (3, 4)))
        powers = rng.uniform(0.1, 1.0, 3)
        reference = sinr(channels, phases, PowerAllocation(powers), 0.2)
        for scale in (1e-6, 0.5, 3.0, 1e4):
            assert_allclose(sinr(channels, phases, PowerAllocation(scale * powers), scale * 0.2), reference,
                            rtol=1e-10)

    def test_common_rotation_per_row(self, random_channels):
        channels = random_channels(3, 4, seed=11)
        rng = np.random.default_rng(12)
        angles = rng.uniform(0, 2 * np.pi, (3, 4))
        powers = PowerAllocation(rng.uniform(0.1, 1.0, 3))
        reference = sinr(channels, PhaseBeamformer.from_angles(angles), powers, 0.2)
        rotated = angles + rng.uniform(0, 2 * np.pi, (3, 1))
        assert_allclose(sinr(channels, PhaseBeamformer.from_angles(rotated), powers, 0.2), reference, rtol=1e-10)

    def test_dimension_mismatch(self, random_channels):
        channels = random_channels(2, 3)
        with pytest.raises(DimensionMismatchError):
            effective_gains(channels, PhaseBeamformer.ones(2, 2))
        with pytest.raises(DimensionMismatchError):
            sinr(channels, PhaseBeamformer.ones(2, 3), PowerAllocation([1.0]), 1.0)

    def test_leakage(self):
        gains = np.zeros((2, 2, 2), dtype=complex)
        gains[0, 0] = gains[1, 1] = [1, 1]
        gains[0, 1] = [1, -1]
        gains[1, 0] = [1, 1]
        channels = ChannelSet(gains)
        phases = PhaseBeamformer.ones(2, 2)
        assert_allclose(leakage(channels, phases), [[0.0, 0.0], [2.0, 0.0]])
        assert_allclose(max_leakage(channels, phases), 1.0)
        assert max_leakage(ChannelSet([[[1.0, 2.0]]]), PhaseBeamformer.ones(1, 2)) == 0.0


class TestValidate:

    @staticmethod
    def _solution(phases: PhaseBeamformer, powers: list[float]) -> BeamformingSolution:
        return BeamformingSolution(method=Method.MRT, status=SolutionStatus.FEASIBLE, phases=phases,
                                   powers=PowerAllocation(powers), sinrs=np.zeros(len(powers)))

    def test_feasible_solution_passes(self, single_user):
        channels, config = single_user
        report = validate(self._solution(PhaseBeamformer.ones(1, 2), [0.5]), config, channels)
        assert report.passed, report

    def test_modulus_violation(self, single_user):
        channels, config = single_user
        phases = PhaseBeamformer([[1.0, 0.5]], check=False)
        report = validate(self._solution(phases, [10.0]), config, channels)
        assert not report[UNIT_MODULUS].passed
        assert_allclose(report[UNIT_MODULUS].residual, 0.5)

    def test_downscaled_powers_fail(self):
        grid = np.array([[[1, 1], [0.3, 0.1j]], [[0.2, -0.1], [1j, 1]]])
        channels = ChannelSet(grid)
        config = unit_noise_config(2, 2, target=0.5)
        phases = PhaseBeamformer.ones(2, 2)
        gains = effective_gains(channels, phases)
        system = np.diag(config.targets / np.diag(gains)) @ (gains - np.diag(np.diag(gains)))
        powers = np.linalg.solve(np.eye(2) - system, config.targets / np.diag(gains))
        assert np.all(powers > 0)
        assert validate(self._solution(phases, list(powers)), config, channels).passed
        report = validate(self._solution(phases, list(0.9 * powers)), config, channels)
        assert SINR in report.failed()

    def test_missing_powers(self, single_user):
        channels, config = single_user
        report = validate(BeamformingSolution.failed(Method.DM, SolutionStatus.INFEASIBLE), config, channels)
        assert not report.passed
