import logging

import numpy as np

from ris_power_min.model.data import PhaseBeamformer

logger = logging.getLogger(__name__)

CONTINUOUS = 0


def phase_levels(bits: int) -> np.ndarray:
    """
    Returns the L = 2^bits unit-modulus levels e^{j 2 pi l / L}, l = 0..L-1.
    """
    if bits < 1:
        raise ValueError(f'Quantization needs at least one bit, got {bits}')
    count = 2 ** bits
    return np.exp(2j * np.pi * np.arange(count) / count)


def quantize_phases(phases: PhaseBeamformer, bits: int) -> PhaseBeamformer:
    """
    Rounds every element to the nearest of the 2^bits uniformly spaced levels. Exact ties go to the
    smaller angle. Zero bits keep the phases continuous.
    """
    if bits == CONTINUOUS:
        return phases
    levels = phase_levels(bits)
    step = 2 * np.pi / len(levels)
    angles = np.mod(np.angle(phases.values), 2 * np.pi)
    indices = np.mod(np.ceil(angles / step - 0.5), len(levels)).astype(np.int64)
    logger.debug('Quantizing %s phases to %s bits', phases, bits)
    return PhaseBeamformer(levels[indices])
