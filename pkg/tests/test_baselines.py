import numpy as np
import pytest
from numpy.testing import assert_allclose

from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.baselines.mrt import mrt_phase, solve_mrt
from ris_power_min.baselines.zf import ZfState, build_zf_state, cross_channel_matrix, projector, solve_zf, \
    zf_feasibility, zf_phase
from ris_power_min.channel.scenario import ScenarioSpec, generate_scenario
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.model.data import ChannelSet, PhaseBeamformer, SystemConfig
from ris_power_min.model.sinr import max_leakage, sinr
from ris_power_min.model.validations import validate
from tests.conftest import unit_noise_config


class TestMrt:

    def test_aligns_direct_channels(self, random_channels):
        channels = random_channels(3, 5, seed=1)
        phases = mrt_phase(channels)
        for k in range(3):
            inner = np.vdot(channels.gain(k, k), phases.vector(k))
            coherent = np.sum(np.abs(channels.gain(k, k)))
            assert_allclose(inner.real, coherent, rtol=1e-12)
            assert abs(inner.imag) <= 1e-12 * coherent

    def test_zero_entries_get_unit_phase(self):
        phases = mrt_phase(ChannelSet([[[0.0, 1j]]]))
        assert_allclose(phases.values, [[1.0, 1j]])

    def test_single_user_power(self, single_user):
        channels, config = single_user
        solution = solve_mrt(channels, config)
        assert solution.status == SolutionStatus.FEASIBLE
        assert_allclose(solution.sum_power_w, 0.5)
        assert solution.diagnostics['max_leakage'] == 0.0

    def test_sinr_equality(self, random_channels):
        channels = random_channels(3, 8, seed=2)
        config = unit_noise_config(3, 8, target=0.5)
        solution = solve_mrt(channels, config)
        assert solution.is_feasible
        assert_allclose(solution.sinrs, config.targets, rtol=1e-6)
        assert validate(solution, config, channels).passed


class TestCompletion:

    def test_infeasible_interference(self):
        channels = ChannelSet(np.ones((2, 2, 1)))
        solution = solve_with_phases(PhaseBeamformer.ones(2, 1), channels, unit_noise_config(2, 1), Method.MRT)
        assert solution.status == SolutionStatus.INFEASIBLE
        assert solution.phases is not None
        assert solution.powers is None

    def test_degenerate_user(self):
        gains = np.ones((2, 2, 2), dtype=complex)
        gains[1, 1] = [1, -1]
        solution = solve_with_phases(PhaseBeamformer.ones(2, 2), ChannelSet(gains), unit_noise_config(2, 2))
        assert solution.status == SolutionStatus.INFEASIBLE

    def test_reports_method_and_diagnostics(self, random_channels):
        channels = random_channels(2, 4, seed=3)
        config = unit_noise_config(2, 4, target=0.5)
        phases = mrt_phase(channels)
        solution = solve_with_phases(phases, channels, config, Method.SDR, {'extra': 1.0})
        assert solution.method == Method.SDR
        assert solution.diagnostics['extra'] == 1.0
        assert solution.diagnostics['iterations'] >= 1
        assert_allclose(solution.sinrs, sinr(channels, phases, solution.powers, 1.0))


class TestZeroForcingGeometry:

    def test_feasibility_condition(self):
        gains = np.ones((2, 2, 3), dtype=complex)
        gains[1, 0] = [3, 1, 1]
        feasibility = zf_feasibility(ChannelSet(gains))
        assert not feasibility.feasible
        assert not feasibility.table[1, 0]
        assert feasibility.table[0, 1]

    def test_projector_properties(self, random_channels):
        channels = random_channels(3, 6, seed=4)
        cross = cross_channel_matrix(channels, 0)
        assert cross.shape == (6, 2)
        zero_forcing = projector(cross)
        assert_allclose(zero_forcing @ zero_forcing, zero_forcing, atol=1e-12)
        assert_allclose(zero_forcing @ cross, 0, atol=1e-12)
        assert_allclose(zero_forcing, zero_forcing.conj().T)

    def test_single_user_projector_is_identity(self):
        state = build_zf_state(ChannelSet([[[1.0, 2.0]]]), 0, 1e3)
        assert_allclose(state.projector, np.eye(2))

    def test_state_rejects_wrong_projector(self):
        cross = np.array([[1.0], [0.0]], dtype=complex)
        with pytest.raises(ValueError):
            ZfState(projector=np.eye(2, dtype=complex), cross_channels=cross, aux=np.zeros(2), penalty=1.0)
        with pytest.raises(ValueError):
            ZfState(projector=2 * np.eye(2, dtype=complex), cross_channels=np.zeros((2, 0)), aux=np.zeros(2),
                    penalty=1.0)


class TestZeroForcingPhases:

    def test_objective_never_decreases(self, random_channels):
        for seed in range(100):
            channels = random_channels(3, 6, seed=seed)
            result = zf_phase(channels, seed % 3, max_iter=200)
            trace = np.array(result.trace)
            assert np.all(np.diff(trace) >= -1e-9 * (1 + np.abs(trace[1:])))

    def test_rotation(self, random_channels):
        channels = random_channels(3, 6, seed=5)
        result = zf_phase(channels, 1)
        inner = np.vdot(channels.gain(1, 1), result.phases)
        assert inner.real >= 0
        assert abs(inner.imag) <= 1e-12 * np.sum(np.abs(channels.gain(1, 1)))
        assert_allclose(np.abs(result.phases), 1.0)

    def test_random_initialization(self, random_channels):
        channels = random_channels(2, 6, seed=6)
        first = zf_phase(channels, 0, init_seed=1)
        second = zf_phase(channels, 0, init_seed=1)
        assert_allclose(first.phases, second.phases)
        assert_allclose(np.abs(first.phases), 1.0)

    def test_larger_penalty_reduces_leakage(self, random_channels):
        leakages = {10.0: [], 1e3: [], 1e5: []}
        for seed in range(10):
            channels = random_channels(2, 8, seed=60 + seed)
            for penalty in leakages:
                phases = [zf_phase(channels, user, penalty, tol=0.0, max_iter=3000).phases for user in range(2)]
                leakages[penalty].append(max_leakage(channels, PhaseBeamformer(np.array(phases))))
        low, middle, high = (np.array(leakages[penalty]) for penalty in (10.0, 1e3, 1e5))
        assert np.all(middle <= low + 1e-9)
        assert np.all(high <= middle + 1e-9)
        assert np.median(high) < 0.1

    def test_two_element_nulling(self):
        gains = np.array([[[1, -1], [1, 1]], [[1, 1], [1, -1]]], dtype=complex)
        channels = ChannelSet(gains)
        result = zf_phase(channels, 0)
        assert_allclose(result.phases, [1, -1], atol=1e-9)
        assert abs(np.vdot(channels.gain(1, 0), result.phases)) <= 1e-9
        assert_allclose(result.trace[-1], 2.0, rtol=1e-3)

    def test_single_user_matches_mrt(self, single_user):
        channels, config = single_user
        assert_allclose(solve_zf(channels, config).sum_power_w, solve_mrt(channels, config).sum_power_w)

    def test_solution_is_valid(self, random_channels):
        channels = random_channels(2, 8, seed=7)
        config = unit_noise_config(2, 8, target=1.0)
        solution = solve_zf(channels, config)
        assert solution.method == Method.ZF
        assert solution.diagnostics['nulling_condition'] in (0.0, 1.0)
        if solution.is_feasible:
            assert validate(solution, config, channels).passed


class TestPowerControlConvergence:

    def test_within_iteration_budget(self):
        for seed in range(50):
            config = SystemConfig.create(4, 16, 2.0)
            channels = generate_scenario(ScenarioSpec.create(config, seed=seed)).channels
            for solution in (solve_mrt(channels, config), solve_zf(channels, config)):
                if solution.is_feasible:
                    assert solution.diagnostics['iterations'] <= 100, f'{solution.method.value} seed {seed}'
