# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Assembly of the sparse approximate inverse and its spectral bound."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import scipy.sparse

from ..linalg import RowEntries, SparseMatrixOracle
from ._local import LocalSolution, SpaiLocalProblem
from ._pattern import Side, SparsityPattern, source_oracle

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Preconditioner:
    """An assembled sparse approximate inverse `M`.

    Instances are immutable and may be shared between threads.
    """

    matrix: SparseMatrixOracle
    """The approximate inverse `M`."""

    residuals: npt.NDArray[np.float64]
    """The local residual `‖Bᵀ m_k − e_k‖₂` of every index `k`."""

    side: Side
    """Whether `M` multiplies the system from the left or the right."""

    level: int
    """The level of the pattern `M` was computed on."""

    rank_deficient: tuple[int, ...] = ()
    """The indices whose local problem was rank deficient."""

    @property
    def dim(self) -> int:
        """The dimension of `M`."""
        return self.matrix.dim

    @property
    def eps_pre(self) -> float:
        """The largest local residual."""
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    @property
    def frobenius_objective(self) -> float:
        """The Frobenius objective `‖MA − I‖_F²` (or `‖AM − I‖_F²`) achieved."""
        return float(np.sum(self.residuals**2))

    def to_csr(self) -> scipy.sparse.csr_matrix:
        """Get `M` as a CSR matrix.

        Returns:
            A copy of `M`.
        """
        return self.matrix.to_csr()

    def query_row(self, k: int) -> RowEntries:
        """Query a row of `M`.

        Args:
            k: the row index.

        Returns:
            The nonzero entries of row `k`.
        """
        return self.matrix.query_row(k)


def _to_matrix(
    solutions: list[LocalSolution], side: Side, dim: int
) -> SparseMatrixOracle:
    rows: list[int] = []
    cols: list[int] = []
    values: list[complex] = []
    for solution in solutions:
        fixed = [solution.index] * len(solution.columns)
        if side is Side.LEFT:
            rows.extend(fixed)
            cols.extend(solution.columns)
        else:
            rows.extend(solution.columns)
            cols.extend(fixed)
        values.extend(solution.values.tolist())
    matrix = scipy.sparse.coo_matrix(
        (np.asarray(values, dtype=np.complex128), (rows, cols)), shape=(dim, dim)
    )
    return SparseMatrixOracle(matrix.tocsr())


def assemble_preconditioner(
    matrix: SparseMatrixOracle,
    pattern: SparsityPattern,
    *,
    max_workers: int | None = None,
) -> Preconditioner:
    """Solve every local problem and assemble `M`.

    The local problems are independent. With `max_workers` greater than one
    they are solved on a thread pool; the result does not depend on the
    completion order.

    Args:
        matrix: the system matrix `A`.
        pattern: the sparsity pattern, which also fixes the side.
        max_workers: the number of worker threads, `None` or 1 to solve
            sequentially.

    Returns:
        The preconditioner.

    Raises:
        ValueError: if the pattern and matrix dimensions differ.
    """
    if pattern.dim != matrix.dim:
        raise ValueError(
            f"pattern dimension {pattern.dim} does not match matrix {matrix.dim}"
        )
    oracle = source_oracle(matrix, pattern.side)

    def solve(k: int) -> LocalSolution:
        return SpaiLocalProblem.from_oracle(oracle, k, pattern.support(k)).solve()

    indices = range(matrix.dim)
    if max_workers is None or max_workers <= 1:
        solutions = [solve(k) for k in indices]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            solutions = list(pool.map(solve, indices))

    precond = Preconditioner(
        matrix=_to_matrix(solutions, pattern.side, matrix.dim),
        residuals=np.array([s.residual for s in solutions], dtype=np.float64),
        side=pattern.side,
        level=pattern.level,
        rank_deficient=tuple(s.index for s in solutions if s.rank_deficient),
    )
    _logger.debug(
        "assembled %s SPAI of level %d: eps_pre=%g, nnz=%d",
        pattern.side.value,
        pattern.level,
        precond.eps_pre,
        precond.matrix.nnz,
    )
    return precond


class SpectralBound(NamedTuple):
    """The outcome of the spectral condition number bound check."""

    applicable: bool
    """Whether `√d·eps_pre < 1`, the condition under which the bound holds."""

    bound: float | None
    """The upper bound on `κ(MA)`, `None` when not applicable."""


def bound_check(precond: Preconditioner, sparsity: int) -> SpectralBound:
    """Check the spectral bound `κ(MA) ≤ (1 + √d·eps_pre)/(1 − √d·eps_pre)`.

    Args:
        precond: the preconditioner.
        sparsity: the sparsity `d` of `A`, the maximum number of nonzero
            entries per row.

    Returns:
        Whether the bound applies and its value.
    """
    scaled = math.sqrt(sparsity) * precond.eps_pre
    if scaled >= 1.0:
        return SpectralBound(applicable=False, bound=None)
    return SpectralBound(applicable=True, bound=(1.0 + scaled) / (1.0 - scaled))
