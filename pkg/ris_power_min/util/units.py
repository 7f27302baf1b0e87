"""
Conversions between logarithmic and linear units, and parsing of quantities with SI or dB suffixes.
Powers are kept in watts and ratios linear everywhere else in the package.
"""
import math
import re

_SI_PREFIXES = {'p': 1e-12, 'n': 1e-9, 'u': 1e-6, 'µ': 1e-6, 'm': 1e-3, '': 1.0, 'k': 1e3, 'M': 1e6, 'G': 1e9}
_QUANTITY = re.compile(r'^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)\s*([^\s]*)\s*$')


def dbm_to_watts(value_dbm: float) -> float:
    """
    Converts a power in dBm to watts.
    """
    return 10 ** ((value_dbm - 30) / 10)


def watts_to_dbm(value_w: float) -> float:
    """
    Converts a positive power in watts to dBm.
    """
    if not value_w > 0:
        raise ValueError(f'Power must be positive to be expressed in dBm: {value_w}')
    return 10 * math.log10(value_w) + 30


def db_to_linear(value_db: float) -> float:
    return 10 ** (value_db / 10)


def linear_to_db(value: float) -> float:
    if not value > 0:
        raise ValueError(f'Ratio must be positive to be expressed in dB: {value}')
    return 10 * math.log10(value)


def parse_quantity(text: str, unit: str = '') -> float:
    """
    Parses a number with an optional suffix into the linear value in the given unit.
    Accepted suffixes: 'dBm' for watts, 'dB' for dimensionless ratios and an SI prefix followed by the unit,
    e.g. '-114dBm', '3dB', '1MHz', '100m', '5mW'. A bare number is taken as is.
    :param text: the text to parse
    :param unit: the expected unit ('W', 'Hz', 'm' or '' for ratios)
    :return: the value
    """
    match = _QUANTITY.match(text)
    if not match:
        raise ValueError(f'Not a number: {text!r}')
    number = float(match.group(1))
    suffix = match.group(2)

    if not suffix:
        return number
    if suffix == 'dBm' and unit == 'W':
        return dbm_to_watts(number)
    if suffix == 'dBW' and unit == 'W':
        return db_to_linear(number)
    if suffix == 'dB' and unit == '':
        return db_to_linear(number)
    if unit and suffix.endswith(unit):
        prefix = suffix[:-len(unit)]
        if prefix in _SI_PREFIXES:
            return number * _SI_PREFIXES[prefix]
    raise ValueError(f'Unsupported suffix {suffix!r} for unit {unit!r}: {text!r}')
