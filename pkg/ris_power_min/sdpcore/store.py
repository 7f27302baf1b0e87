"""
This module dumps `SdpProblem`s in a plain-text sparse-triplet format for debugging:

    # sdp <variables> <scalar constraints> <lmi blocks> <minimize|maximize>
    v <variable> <name> <scale> <objective coefficient>
    s <constraint> <variable> <coefficient>
    b <constraint> <name> <sense> <bound>
    l <block> <row> <col> <variable> <real> <imag>

Variable -1 in an 'l' line denotes the constant term of the block. Indices are zero based.
"""
import logging
from typing import TextIO

import numpy as np

from ris_power_min.sdpcore.problem import SdpProblem

logger = logging.getLogger(__name__)


def write_triplets(problem: SdpProblem, stream: TextIO) -> None:
    """
    Writes the specified problem to a text stream.
    """
    stream.write(f'# sdp {problem.num_variables} {len(problem.scalar_constraints)} {len(problem.lmi_blocks)} '
                 f'{problem.sense.value}\n')
    for index, (name, scale, coefficient) in enumerate(zip(problem.variable_names, problem.scales,
                                                           problem.objective)):
        stream.write(f'v {index} {name} {scale:.17g} {coefficient:.17g}\n')

    for index, constraint in enumerate(problem.scalar_constraints):
        for variable, coefficient in zip(constraint.indices, constraint.coefficients):
            stream.write(f's {index} {variable} {coefficient:.17g}\n')
        stream.write(f'b {index} {constraint.name} {constraint.sense.value} {constraint.bound:.17g}\n')

    for index, block in enumerate(problem.lmi_blocks):
        size = block.size
        rows, cols = np.nonzero(block.constant)
        for row, col in zip(rows, cols):
            value = block.constant[row, col]
            stream.write(f'l {index} {row} {col} -1 {value.real:.17g} {value.imag:.17g}\n')
        coo = block.coefficients.tocoo()
        for position, variable, value in zip(coo.row, coo.col, coo.data):
            stream.write(f'l {index} {position // size} {position % size} {variable} '
                         f'{value.real:.17g} {value.imag:.17g}\n')
    logger.debug('Wrote SDP with %s variables as triplets', problem.num_variables)
