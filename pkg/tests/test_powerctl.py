import numpy as np
import pytest
from numpy.testing import assert_allclose

from ris_power_min.cross_section.exceptions import DegenerateChannelError
from ris_power_min.model.data import ChannelSet, PhaseBeamformer, PowerAllocation
from ris_power_min.model.sinr import sinr
from ris_power_min.powerctl.gains import GainTable, build_gain_table, interference_map
from ris_power_min.powerctl.iteration import direct_solve, fixed_point


def _symmetric(direct: float, cross: float) -> GainTable:
    return GainTable.create([direct, direct], [[0.0, cross], [cross, 0.0]])


def _random_feasible_table(rng: np.random.Generator, num_users: int = 3) -> tuple[GainTable, np.ndarray]:
    table = GainTable.create(rng.uniform(1.0, 2.0, num_users), rng.uniform(0.0, 0.1, (num_users, num_users)))
    return table, rng.uniform(0.5, 2.0, num_users)


class TestGainTable:

    def test_single_user(self):
        table = build_gain_table(ChannelSet([[[1.0, 1.0]]]), PhaseBeamformer.ones(1, 2))
        assert_allclose(table.direct, [4.0])

    def test_orthogonal_cross_gain(self):
        gains = np.array([[[1, 1], [1, -1]], [[1, 1], [1, 1]]], dtype=complex)
        table = build_gain_table(ChannelSet(gains), PhaseBeamformer.ones(2, 2))
        assert table.cross[0, 1] == 0.0
        assert_allclose(table.cross[1, 0], 4.0)
        assert np.all(np.diag(table.cross) == 0)

    def test_degenerate_direct_gain(self):
        table = GainTable.create([0.0, 1.0], np.zeros((2, 2)))
        with pytest.raises(DegenerateChannelError) as error:
            fixed_point(table, np.ones(2), 1.0)
        assert error.value.user == 0


class TestInterferenceMap:

    def test_single_user_is_constant(self):
        table = GainTable.create([4.0], [[0.0]])
        for power in (0.0, 1.0, 100.0):
            assert_allclose(interference_map(PowerAllocation([power]), table, [2.0], 1.0).values, [0.5])

    def test_matches_explicit_evaluation(self):
        rng = np.random.default_rng(3)
        table, targets = _random_feasible_table(rng)
        powers = rng.uniform(0, 1, 3)
        expected = [targets[k] / table.direct[k] * (sum(table.cross[k, i] * powers[i] for i in range(3) if i != k)
                                                    + 0.7) for k in range(3)]
        assert_allclose(interference_map(PowerAllocation(powers), table, targets, 0.7).values, expected)

    def test_standard_interference_axioms(self):
        rng = np.random.default_rng(4)
        for _ in range(1000):
            table, targets = _random_feasible_table(rng)
            low = rng.uniform(0, 1, 3)
            high = low + rng.uniform(0, 1, 3)
            scale = 1 + rng.uniform(1e-3, 3)
            f_low = interference_map(PowerAllocation(low), table, targets, 1.0).values
            f_high = interference_map(PowerAllocation(high), table, targets, 1.0).values
            f_scaled = interference_map(PowerAllocation(scale * low), table, targets, 1.0).values
            assert np.all(f_low > 0)
            assert np.all(f_low <= f_high)
            assert np.all(scale * f_low > f_scaled)


class TestFixedPoint:

    def test_single_user(self):
        result = fixed_point(GainTable.create([4.0], [[0.0]]), [2.0], 1.0)
        assert result.feasible
        assert_allclose(result.powers.values, [0.5])

    def test_symmetric_closed_form(self):
        result = fixed_point(_symmetric(4.0, 1.0), [2.0, 2.0], 1.0)
        assert result.feasible
        assert_allclose(result.powers.values, [1.0, 1.0], rtol=1e-9)

    def test_symmetric_infeasible(self):
        result = fixed_point(_symmetric(1.0, 1.0), [2.0, 2.0], 1.0)
        assert not result.feasible
        assert result.reason

    def test_trace_increases_from_zero(self):
        table, targets = _random_feasible_table(np.random.default_rng(5))
        trace = np.array(fixed_point(table, targets, 1.0).trace)
        assert np.all(np.diff(trace) >= 0)

    def test_equality_for_tiny_powers(self):
        channels = ChannelSet(1e-6 * np.array([[[1, 0.5]], [[0.2, 1j]]]).reshape(2, 2, 1) + 0j)
        phases = PhaseBeamformer.ones(2, 1)
        targets = np.array([2.0, 1.0])
        result = fixed_point(build_gain_table(channels, phases), targets, 1e-20)
        assert result.feasible
        achieved = sinr(channels, phases, result.powers, 1e-20)
        assert_allclose(achieved, targets, rtol=1e-6)


class TestDirectSolve:

    def test_single_user(self):
        result = direct_solve(GainTable.create([4.0], [[0.0]]), [2.0], 1.0)
        assert_allclose(result.powers.values, [0.5])

    def test_agrees_with_fixed_point(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            table, targets = _random_feasible_table(rng)
            iterated = fixed_point(table, targets, 1.0)
            solved = direct_solve(table, targets, 1.0)
            assert iterated.feasible and solved.feasible
            assert_allclose(iterated.powers.values, solved.powers.values, rtol=1e-8)

    def test_infeasible_beyond_unit_spectral_radius(self):
        for radius in np.linspace(1.05, 2.0, 20):
            table = _symmetric(1.0, radius / 2.0)
            assert not direct_solve(table, [2.0, 2.0], 1.0).feasible
            assert not fixed_point(table, [2.0, 2.0], 1.0).feasible

    def test_spectral_radius_reported(self):
        result = direct_solve(_symmetric(1.0, 0.6), [2.0, 2.0], 1.0)
        assert not result.feasible
        assert 'spectral radius' in result.reason
