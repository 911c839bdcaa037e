# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Row oracles of the preconditioned system built from local queries."""

import functools
from collections import defaultdict
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
import scipy.sparse

from ..linalg import ComplexArray, RowEntries, RowOracle, SparseMatrixOracle
from ._local import SpaiLocalProblem
from ._pattern import Side, support_for_index
from ._preconditioner import Preconditioner


def _combine(weights: RowEntries, rows: Callable[[int], RowEntries]) -> RowEntries:
    accumulated: defaultdict[int, complex] = defaultdict(complex)
    for j, weight in weights:
        for column, value in rows(j):
            accumulated[column] += weight * value
    return [(j, v) for j, v in sorted(accumulated.items()) if v != 0.0]


def preconditioned_row_oracle(
    matrix: RowOracle, precond: Preconditioner, k: int
) -> RowEntries:
    """Compute row `k` of the preconditioned matrix from row queries.

    For a left preconditioner this is row `k` of `MA`, a combination of the
    rows of `A` weighted by row `k` of `M`. For a right preconditioner it is
    row `k` of `AM`. One row of the other factor is queried per nonzero of
    the row used as weights. A row of `A` has at most `d` nonzeros, while a
    level `l` pattern allows up to `d^l` nonzeros in a row of `M`, so the
    left form touches up to `d²` rows of `A` at level 2.

    Args:
        matrix: the row oracle of `A`.
        precond: the preconditioner `M`.
        k: the row index.

    Returns:
        The nonzero entries of the row, sorted by column.

    Raises:
        IndexError: if `k` is out of range.
    """
    if not 0 <= k < matrix.dim:
        raise IndexError(f"row {k} out of range for dimension {matrix.dim}")
    if precond.side is Side.LEFT:
        return _combine(precond.query_row(k), matrix.query_row)
    return _combine(matrix.query_row(k), precond.query_row)


class PreconditionedOracle:
    """The preconditioned matrix `MA` (or `AM`) behind the row-oracle interface.

    Rows are evaluated on demand and never stored.
    """

    def __init__(self, matrix: RowOracle, precond: Preconditioner) -> None:
        """Compose a system matrix with its preconditioner.

        Args:
            matrix: the row oracle of `A`.
            precond: the preconditioner `M`.

        Raises:
            ValueError: if the dimensions differ.
        """
        if matrix.dim != precond.dim:
            raise ValueError(
                f"matrix dimension {matrix.dim} does not match "
                f"preconditioner {precond.dim}"
            )
        self._matrix = matrix
        self._precond = precond

    @property
    def dim(self) -> int:
        """The dimension of the composed matrix."""
        return self._matrix.dim

    @functools.cached_property
    def sparsity(self) -> int:
        """The maximum number of nonzero entries per row of the composed matrix."""
        return self.to_oracle().sparsity

    @property
    def side(self) -> Side:
        """The side the preconditioner is applied on."""
        return self._precond.side

    def query_row(self, k: int) -> RowEntries:
        """Compute a row of the composed matrix.

        Args:
            k: the row index.

        Returns:
            The nonzero entries of the row, sorted by column.
        """
        return preconditioned_row_oracle(self._matrix, self._precond, k)

    def to_oracle(self) -> SparseMatrixOracle:
        """Evaluate every row into an explicit oracle.

        Returns:
            The composed matrix as a sparse oracle.
        """
        rows: list[int] = []
        cols: list[int] = []
        values: list[complex] = []
        for k in range(self.dim):
            for j, value in self.query_row(k):
                rows.append(k)
                cols.append(j)
                values.append(value)
        shape = (self.dim, self.dim)
        return SparseMatrixOracle(
            scipy.sparse.coo_matrix((values, (rows, cols)), shape=shape)
        )


def preconditioned_rhs_element(
    precond: Preconditioner, rhs: Callable[[int], complex], j: int
) -> complex:
    """Compute element `j` of the preconditioned right-hand side.

    For a left preconditioner this is `(Mb)_j`, read from row `j` of `M` and
    at most `d` queries of `b`. A right preconditioner leaves the right-hand
    side unchanged, so `b_j` is returned.

    Args:
        precond: the preconditioner `M`.
        rhs: the element oracle of `b`.
        j: the element index.

    Returns:
        The element.

    Raises:
        IndexError: if `j` is out of range.
    """
    if not 0 <= j < precond.dim:
        raise IndexError(f"element {j} out of range for dimension {precond.dim}")
    if precond.side is Side.RIGHT:
        return complex(rhs(j))
    return complex(sum(value * rhs(i) for i, value in precond.query_row(j)))


def preconditioned_rhs(precond: Preconditioner, rhs: npt.ArrayLike) -> ComplexArray:
    """Compute the whole preconditioned right-hand side element by element.

    Args:
        precond: the preconditioner `M`.
        rhs: the right-hand side `b`.

    Returns:
        `Mb` for a left preconditioner, `b` for a right one.

    Raises:
        ValueError: if the length of `rhs` does not match.
    """
    vector = np.asarray(rhs, dtype=np.complex128)
    if vector.shape != (precond.dim,):
        raise ValueError(
            f"right-hand side of shape {vector.shape} does not match "
            f"dimension {precond.dim}"
        )

    def element(i: int) -> complex:
        return complex(vector[i])

    return np.array(
        [preconditioned_rhs_element(precond, element, j) for j in range(precond.dim)],
        dtype=np.complex128,
    )


def local_preconditioned_row(matrix: RowOracle, k: int, level: int) -> RowEntries:
    """Compute row `k` of `MA` without assembling `M`.

    Row `k` of a left preconditioner only depends on its own local problem,
    which is solved on the spot from row queries of `A` and then combined with
    the rows of `A` it weights. The number of queries is bounded by a
    constant times `d²` for level 2 patterns and `d` for lower levels.

    Args:
        matrix: the row oracle of `A`.
        k: the row index.
        level: the pattern level of the preconditioner.

    Returns:
        The nonzero entries of the row, sorted by column.

    Raises:
        IndexError: if `k` is out of range.
    """
    if not 0 <= k < matrix.dim:
        raise IndexError(f"row {k} out of range for dimension {matrix.dim}")
    support = support_for_index(matrix, k, level)
    solution = SpaiLocalProblem.from_oracle(matrix, k, support).solve()
    weights = [
        (j, complex(v))
        for j, v in zip(solution.columns, solution.values.tolist())
        if v != 0.0
    ]
    return _combine(weights, matrix.query_row)
