"""
A small representation of semidefinite programs over a real variable vector x:

    minimize or maximize   c^T x
    subject to             a_i^T x (<=, ==, >=) b_i          (scalar constraints)
                           F_0 + sum_j x_j F_j  is PSD        (Hermitian LMI blocks)

Every variable carries a scale; the physical value of variable j is scale_j * x_j.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from ris_power_min.cross_section.exceptions import DimensionMismatchError
from ris_power_min.util.types import FloatingArray, IntegerArray, ComplexMatrix

# relative tolerance of the Hermitian check of assembled blocks
HERMITIAN_TOLERANCE = 1e-14


class ObjectiveSense(str, Enum):
    MINIMIZE = 'minimize'
    MAXIMIZE = 'maximize'


class ConstraintSense(str, Enum):
    LESS_EQUAL = '<='
    EQUAL = '=='
    GREATER_EQUAL = '>='


class SdpStatus(str, Enum):
    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'
    NUMERICAL_FAILURE = 'NumericalFailure'


@dataclass(frozen=True)
class ScalarConstraint:
    """
    A linear constraint sum_j coefficients_j x_{indices_j} (sense) bound.
    """
    name: str
    indices: IntegerArray
    coefficients: FloatingArray
    sense: ConstraintSense
    bound: float

    def evaluate(self, x: FloatingArray) -> float:
        return float(np.dot(self.coefficients, x[self.indices]))

    def violation(self, x: FloatingArray) -> float:
        """
        Returns the amount by which x violates this constraint (zero if satisfied).
        """
        difference = self.evaluate(x) - self.bound
        if self.sense == ConstraintSense.LESS_EQUAL:
            return max(difference, 0.0)
        if self.sense == ConstraintSense.GREATER_EQUAL:
            return max(-difference, 0.0)
        return abs(difference)


class LmiBlock:
    """
    An affine Hermitian matrix-valued map F(x) = F_0 + sum_j x_j F_j required to be positive semidefinite.
    The matrices F_j are the columns of a sparse (n*n) x m matrix holding their row-major vectorizations.
    """

    def __init__(self, name: str, constant: ComplexMatrix, coefficients: sp.spmatrix):
        constant = np.asarray(constant, dtype=complex)
        size = constant.shape[0]
        if constant.shape != (size, size) or coefficients.shape[0] != size * size:
            raise DimensionMismatchError(f'LMI block {name}: constant {constant.shape} and coefficients '
                                         f'{coefficients.shape} do not fit')
        self._name = name
        self._constant = constant
        self._coefficients = sp.csr_matrix(coefficients, dtype=complex)
        self._check_hermitian()

    def _check_hermitian(self) -> None:
        size = self.size
        scale = max(1.0, float(np.max(np.abs(self._constant), initial=0.0)))
        if np.max(np.abs(self._constant - self._constant.conj().T), initial=0.0) > HERMITIAN_TOLERANCE * scale:
            raise ValueError(f'Constant of LMI block {self._name} is not Hermitian.')

        index = np.arange(size * size)
        transposed = (index % size) * size + index // size
        coefficients = self._coefficients
        difference = coefficients - coefficients[transposed, :].conj()
        scale = max(1.0, float(np.max(np.abs(coefficients.data), initial=0.0)))
        if difference.nnz and np.max(np.abs(difference.data)) > HERMITIAN_TOLERANCE * scale:
            raise ValueError(f'Coefficients of LMI block {self._name} are not Hermitian.')

    @property
    def name(self) -> str:
        return self._name

    @property
    def size(self) -> int:
        return self._constant.shape[0]

    @property
    def constant(self) -> ComplexMatrix:
        return self._constant

    @property
    def coefficients(self) -> sp.csr_matrix:
        return self._coefficients

    def evaluate(self, x: FloatingArray) -> ComplexMatrix:
        """
        Returns F(x).
        """
        return self._constant + (self._coefficients @ x).reshape(self.size, self.size)

    def real_embedding(self) -> tuple[FloatingArray, sp.csr_matrix]:
        """
        Returns the constant and the coefficients of the real symmetric 2n x 2n map
        [[Re F, -Im F], [Im F, Re F]], which is PSD iff F is PSD.
        """
        size = self.size
        constant = np.block([[self._constant.real, -self._constant.imag],
                             [self._constant.imag, self._constant.real]])

        coo = self._coefficients.tocoo()
        rows, cols = coo.row // size, coo.row % size
        real, imag = coo.data.real, coo.data.imag
        double = 2 * size

        def vec(r: np.ndarray, c: np.ndarray) -> np.ndarray:
            return r * double + c

        embedded_rows = np.concatenate((vec(rows, cols), vec(rows, cols + size),
                                        vec(rows + size, cols), vec(rows + size, cols + size)))
        embedded_cols = np.tile(coo.col, 4)
        embedded_data = np.concatenate((real, -imag, imag, real))
        coefficients = sp.csr_matrix((embedded_data, (embedded_rows, embedded_cols)),
                                     shape=(double * double, self._coefficients.shape[1]))
        return constant, coefficients


@dataclass(frozen=True)
class SdpProblem:
    """
    A semidefinite program in the form described in the module docstring.
    """
    variable_names: tuple[str, ...]
    objective: FloatingArray
    sense: ObjectiveSense
    scalar_constraints: tuple[ScalarConstraint, ...]
    lmi_blocks: tuple[LmiBlock, ...]
    variable_scales: Optional[FloatingArray] = None

    def __post_init__(self) -> None:
        count = len(self.variable_names)
        if self.objective.shape != (count,):
            raise DimensionMismatchError(f'Objective has shape {self.objective.shape}, expected ({count},)')
        if self.variable_scales is not None and self.variable_scales.shape != (count,):
            raise DimensionMismatchError(f'Variable scales have shape {self.variable_scales.shape}')
        for constraint in self.scalar_constraints:
            if len(constraint.indices) != len(constraint.coefficients) or \
                    (len(constraint.indices) and (constraint.indices.min() < 0 or constraint.indices.max() >= count)):
                raise DimensionMismatchError(f'Scalar constraint {constraint.name} references unknown variables')
        for block in self.lmi_blocks:
            if block.coefficients.shape[1] != count:
                raise DimensionMismatchError(f'LMI block {block.name} has {block.coefficients.shape[1]} columns, '
                                             f'expected {count}')

    @property
    def num_variables(self) -> int:
        return len(self.variable_names)

    @property
    def scales(self) -> FloatingArray:
        if self.variable_scales is None:
            return np.ones(self.num_variables)
        return self.variable_scales

    def index(self, name: str) -> int:
        return self.variable_names.index(name)

    def primal_residual(self, x: FloatingArray) -> float:
        """
        Returns the largest relative constraint violation of the internal variable vector x.
        """
        residuals = [constraint.violation(x) / (1 + abs(constraint.bound)) for constraint in self.scalar_constraints]
        for block in self.lmi_blocks:
            eigenvalues = np.linalg.eigvalsh(block.evaluate(x))
            scale = max(1.0, float(np.max(np.abs(eigenvalues))))
            residuals.append(max(0.0, -float(eigenvalues[0])) / scale)
        return max(residuals, default=0.0)


@dataclass(frozen=True)
class SdpSolution:
    """
    Result of a solve. Values are physical (scaled) and NaN unless the status is Optimal.

    Attributes
    ----------
    values: physical variable values
    objective_value: c^T x of the internal variables
    status: the outcome
    residuals: relative 'primal' violation, 'dual' cone violation and complementarity 'gap'
    iterations: number of interior-point iterations
    certificate: solver-level diagnostic of the outcome (the back end status)
    """
    values: FloatingArray
    objective_value: float
    status: SdpStatus
    residuals: dict[str, float] = field(default_factory=dict)
    iterations: int = 0
    certificate: str = ''

    def value(self, problem: SdpProblem, name: str) -> float:
        return float(self.values[problem.index(name)])

    @classmethod
    def failed(cls, num_variables: int, status: SdpStatus, certificate: str, iterations: int = 0) -> 'SdpSolution':
        return cls(values=np.full(num_variables, np.nan), objective_value=float('nan'), status=status,
                   residuals={}, iterations=iterations, certificate=certificate)


def scalar_constraint(name: str, indices: Sequence[int], coefficients: Sequence[float],
                      sense: ConstraintSense, bound: float) -> ScalarConstraint:
    """
    Creates a scalar constraint from plain sequences.
    """
    return ScalarConstraint(name=name, indices=np.asarray(indices, dtype=np.int64),
                            coefficients=np.asarray(coefficients, dtype=float), sense=sense, bound=float(bound))
