import pytest
from numpy.testing import assert_allclose

from ris_power_min.util.units import dbm_to_watts, watts_to_dbm, db_to_linear, linear_to_db, parse_quantity


class TestPowerUnits:

    def test_dbm_to_watts(self):
        assert_allclose(dbm_to_watts(0), 1e-3)
        assert_allclose(dbm_to_watts(30), 1.0)
        assert_allclose(dbm_to_watts(-114), 3.981e-15, rtol=1e-3)

    def test_watts_to_dbm_inverts(self):
        for value in (1e-15, 1e-3, 0.5, 20.0):
            assert_allclose(dbm_to_watts(watts_to_dbm(value)), value, rtol=1e-12)

    @pytest.mark.parametrize('value', [0.0, -1.0, float('nan')])
    def test_watts_to_dbm_rejects_nonpositive(self, value):
        with pytest.raises(ValueError):
            watts_to_dbm(value)

    def test_ratios(self):
        assert_allclose(db_to_linear(3), 10 ** 0.3)
        assert_allclose(linear_to_db(100), 20.0)
        with pytest.raises(ValueError):
            linear_to_db(0)


class TestParseQuantity:

    def test_bare_number(self):
        assert parse_quantity('2') == 2.0
        assert parse_quantity(' 1e-3 ') == 1e-3

    def test_dbm(self):
        assert_allclose(parse_quantity('-114dBm', 'W'), dbm_to_watts(-114))
        assert_allclose(parse_quantity('0dBW', 'W'), 1.0)

    def test_db_ratio(self):
        assert_allclose(parse_quantity('3dB'), 10 ** 0.3)

    def test_si_prefixes(self):
        assert_allclose(parse_quantity('1MHz', 'Hz'), 1e6)
        assert_allclose(parse_quantity('5mW', 'W'), 5e-3)
        assert_allclose(parse_quantity('500m', 'm'), 500.0)
        assert_allclose(parse_quantity('2km', 'm'), 2000.0)

    @pytest.mark.parametrize('text, unit', [('abc', ''), ('3dBm', ''), ('1MHz', 'W'), ('5 x', 'm')])
    def test_rejects_unknown(self, text, unit):
        with pytest.raises(ValueError):
            parse_quantity(text, unit)

    def test_infinite_not_number(self):
        with pytest.raises(ValueError):
            parse_quantity('inf')
