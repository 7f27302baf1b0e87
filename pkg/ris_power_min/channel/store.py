"""
This module reads and writes channel grids in a plain-text matrix format:
a header line '# K N' followed by K*K lines in row-major (user k, row i) order,
each holding the N complex entries of g_ki as whitespace separated tokens 'a+bj'.
"""
import logging
from typing import TextIO

import numpy as np

from ris_power_min.cross_section.exceptions import DimensionMismatchError
from ris_power_min.model.data import ChannelSet

logger = logging.getLogger(__name__)


def _format_complex(value: complex) -> str:
    return f'{value.real:.17g}{value.imag:+.17g}j'


def write_channels(channels: ChannelSet, stream: TextIO) -> None:
    """
    Writes the specified channels to a text stream.
    """
    num_users, units = channels.num_users, channels.units_per_user
    stream.write(f'# {num_users} {units}\n')
    for vector in channels.gains.reshape(num_users * num_users, units):
        stream.write(' '.join(_format_complex(value) for value in vector))
        stream.write('\n')
    logger.debug('Wrote channels K=%s, N=%s', num_users, units)


def read_channels(stream: TextIO) -> ChannelSet:
    """
    Reads channels written by `write_channels`.
    """
    lines = [line.strip() for line in stream if line.strip()]
    if not lines or not lines[0].startswith('#'):
        raise ValueError('Missing channel header line "# K N".')
    try:
        num_users, units = (int(token) for token in lines[0][1:].split())
    except ValueError as error:
        raise ValueError(f'Malformed channel header: {lines[0]!r}') from error

    rows = [[complex(token) for token in line.split()] for line in lines[1:]]
    if len(rows) != num_users * num_users or any(len(row) != units for row in rows):
        raise DimensionMismatchError(f'Channel body does not match header K={num_users}, N={units}')
    return ChannelSet(np.array(rows, dtype=complex).reshape(num_users, num_users, units))
