# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""The independent local least-squares problems of a sparse approximate inverse.

For the unit vector index `k` the problem is `min ‖Bᵀ m − e_k‖₂` over vectors
`m` supported on the pattern entry `J` of `k`. Only the rows `I` of `Bᵀ[:, J]`
that hold a nonzero entry matter, and they are known from the row queries of
`B` at the indices in `J`, so the local matrix `Â = Bᵀ[I, J]` is small and
independent of the dimension.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..linalg import ComplexArray, RowOracle, SparseMatrixOracle
from ._pattern import SparsityPattern, source_oracle

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalSolution:
    """The solution `m_k` of one local problem."""

    index: int
    """The unit vector index `k`."""

    columns: tuple[int, ...]
    """The global indices the entries of `values` belong to."""

    values: ComplexArray
    """The nonzero-pattern entries of `m_k`."""

    residual: float
    """The achieved minimum `‖Bᵀ m_k − e_k‖₂`."""

    rank_deficient: bool
    """Whether the local matrix was rank deficient.

    In that case `values` is the minimum-norm least-squares solution.
    """


@dataclass(frozen=True)
class SpaiLocalProblem:
    """A local problem `min ‖Â m̂ − ê_k‖₂` with its global index sets."""

    index: int
    """The unit vector index `k`."""

    rows: tuple[int, ...]
    """The global row indices `I` of the local matrix, `k` included."""

    columns: tuple[int, ...]
    """The global column indices `J`, the allowed support of `m_k`."""

    matrix: ComplexArray
    """The dense local matrix `Â`, shape `(len(rows), len(columns))`."""

    unit_vector: ComplexArray
    """The unit vector `e_k` restricted to `rows`."""

    @classmethod
    def from_oracle(
        cls, oracle: RowOracle, index: int, support: tuple[int, ...]
    ) -> "SpaiLocalProblem":
        """Build the local problem from one row query of `B` per support index.

        Args:
            oracle: the row oracle of `B`.
            index: the unit vector index `k`.
            support: the allowed support `J` of `m_k`.

        Returns:
            The local problem.

        Raises:
            ValueError: if the support is empty.
        """
        if not support:
            raise ValueError(f"support of index {index} is empty")
        queried = [oracle.query_row(j) for j in support]
        rows = sorted({i for entries in queried for i, _ in entries} | {index})
        position = {i: local for local, i in enumerate(rows)}
        matrix = np.zeros((len(rows), len(support)), dtype=np.complex128)
        for column, entries in enumerate(queried):
            for i, value in entries:
                matrix[position[i], column] = value
        unit_vector = np.zeros(len(rows), dtype=np.complex128)
        unit_vector[position[index]] = 1.0
        return cls(
            index=index,
            rows=tuple(rows),
            columns=tuple(support),
            matrix=matrix,
            unit_vector=unit_vector,
        )

    def normal_residual(self, values: npt.ArrayLike) -> float:
        """Evaluate the optimality certificate `‖Â†(Â m̂ − ê_k)‖₂`.

        Args:
            values: a candidate `m̂`.

        Returns:
            The norm of the normal-equations residual, zero at the optimum.
        """
        candidate = np.asarray(values, dtype=np.complex128)
        residual = self.matrix @ candidate - self.unit_vector
        return float(np.linalg.norm(self.matrix.conj().T @ residual))

    def solve(self) -> LocalSolution:
        """Solve the local least-squares problem.

        A column-pivoted QR factorization is used when `Â` has full column
        rank, otherwise the minimum-norm solution from an SVD-based solver.

        Returns:
            The local solution.
        """
        n_rows, n_cols = self.matrix.shape
        rank_deficient = n_rows < n_cols
        values: ComplexArray | None = None
        if not rank_deficient:
            q, r, permutation = scipy.linalg.qr(
                self.matrix, pivoting=True, mode="economic"
            )
            diagonal = np.abs(np.diag(r))
            threshold = max(n_rows, n_cols) * np.finfo(np.float64).eps * diagonal[0]
            if diagonal[0] > 0.0 and np.all(diagonal > threshold):
                permuted = scipy.linalg.solve_triangular(
                    r, q.conj().T @ self.unit_vector
                )
                values = np.empty(n_cols, dtype=np.complex128)
                values[permutation] = permuted
            else:
                rank_deficient = True
        if values is None:
            _logger.warning(
                "local problem %d is rank deficient (%dx%d), using minimum norm",
                self.index,
                n_rows,
                n_cols,
            )
            values = np.asarray(
                scipy.linalg.lstsq(self.matrix, self.unit_vector)[0],
                dtype=np.complex128,
            )
        residual = float(np.linalg.norm(self.matrix @ values - self.unit_vector))
        return LocalSolution(
            index=self.index,
            columns=self.columns,
            values=values,
            residual=residual,
            rank_deficient=rank_deficient,
        )


def solve_local(
    matrix: SparseMatrixOracle, pattern: SparsityPattern, index: int
) -> LocalSolution:
    """Solve the local problem of one unit vector index.

    For the left side the solution is row `k` of `M`, for the right side
    column `k`.

    Args:
        matrix: the system matrix `A`.
        pattern: the sparsity pattern, which also fixes the side.
        index: the unit vector index `k`.

    Returns:
        The local solution.

    Raises:
        IndexError: if the index is out of range.
    """
    if not 0 <= index < matrix.dim:
        raise IndexError(f"index {index} out of range [0, {matrix.dim})")
    oracle = source_oracle(matrix, pattern.side)
    problem = SpaiLocalProblem.from_oracle(oracle, index, pattern.support(index))
    return problem.solve()
