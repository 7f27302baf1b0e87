"""
Definitions for frequently used type aliases.
"""
from typing import Literal

import numpy as np

# Type definition for a 1-dimensional array of floats
FloatingArray = np.ndarray[Literal[1], np.dtype[np.floating]]
# Type definition for a 1-dimensional array of integers
IntegerArray = np.ndarray[Literal[1], np.dtype[np.signedinteger]]
# Type definition for a 1-dimensional array of complex numbers
ComplexArray = np.ndarray[Literal[1], np.dtype[np.complexfloating]]
# Type definition for a 2-dimensional array of floats
FloatingMatrix = np.ndarray[Literal[2], np.dtype[np.floating]]
# Type definition for a 2-dimensional array of complex numbers
ComplexMatrix = np.ndarray[Literal[2], np.dtype[np.complexfloating]]
# Type definition for the K x K x N channel grid
ComplexTensor = np.ndarray[Literal[3], np.dtype[np.complexfloating]]
