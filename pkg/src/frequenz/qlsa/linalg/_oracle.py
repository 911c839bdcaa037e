# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Row-query access to sparse complex matrices."""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import logging
from typing import Any, Protocol

import numpy as np
import numpy.typing as npt
import scipy.sparse

from .._internal._constants import HERMITIAN_TOLERANCE
from ._exceptions import ContractViolationError

_logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]
"""A numpy array of complex doubles."""

RowEntries = list[tuple[int, complex]]
"""The nonzero entries of a matrix row as `(column, value)` pairs."""


class RowOracle(Protocol):
    """Anything that answers row queries of a square matrix."""

    @property
    def dim(self) -> int:
        """The dimension `N` of the matrix."""

    @property
    def sparsity(self) -> int:
        """The maximum number of nonzero entries per row."""

    def query_row(self, k: int) -> RowEntries:
        """Get the nonzero entries of a row, sorted by column.

        Args:
            k: the row index.
        """


def _is_hermitian(matrix: scipy.sparse.csr_matrix) -> bool:
    if matrix.nnz == 0:
        return True
    scale = float(abs(matrix).max())
    difference = matrix - matrix.conj().T
    if difference.nnz == 0:
        return True
    return bool(abs(difference).max() <= HERMITIAN_TOLERANCE * scale)


class SparseMatrixOracle:
    """Immutable row-query oracle over a square sparse complex matrix.

    This is the black-box access model for the system matrix: a query for row
    `k` returns the nonzero entries of that row sorted by column. Explicit
    zeros are removed at construction, so repeated queries are deterministic
    and never return zero values.
    """

    def __init__(
        self,
        matrix: Any,
        *,
        hermitian: bool | None = None,
    ) -> None:
        """Create an oracle from any scipy sparse matrix or dense array.

        Args:
            matrix: the square matrix to wrap. It is copied.
            hermitian: whether the matrix is Hermitian. When `None` this is
                detected from the values.

        Raises:
            ContractViolationError: if the matrix is not square, or it is
                declared Hermitian but isn't.
        """
        csr = scipy.sparse.csr_matrix(matrix, dtype=np.complex128, copy=True)
        if csr.shape[0] != csr.shape[1] or csr.shape[0] == 0:
            raise ContractViolationError(
                f"oracle matrices must be square and non-empty, got {csr.shape}"
            )
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        detected = _is_hermitian(csr)
        if hermitian and not detected:
            raise ContractViolationError("matrix declared Hermitian is not Hermitian")
        self._matrix: scipy.sparse.csr_matrix = csr
        self._hermitian: bool = detected if hermitian is None else hermitian
        row_lengths = np.diff(csr.indptr)
        self._sparsity: int = max(1, int(row_lengths.max()))

    @classmethod
    def from_dense(cls, matrix: npt.ArrayLike) -> SparseMatrixOracle:
        """Create an oracle from a dense array.

        Args:
            matrix: the dense square matrix.

        Returns:
            The oracle.
        """
        return cls(np.asarray(matrix, dtype=np.complex128))

    @classmethod
    def identity(cls, dim: int) -> SparseMatrixOracle:
        """Create the identity oracle.

        Args:
            dim: the dimension.

        Returns:
            The identity oracle of the given dimension.
        """
        return cls(scipy.sparse.identity(dim, dtype=np.complex128, format="csr"))

    @property
    def dim(self) -> int:
        """The dimension `N` of the matrix."""
        return int(self._matrix.shape[0])

    @property
    def sparsity(self) -> int:
        """The maximum number of nonzero entries per row, `d`."""
        return self._sparsity

    @property
    def hermitian(self) -> bool:
        """Whether the matrix is Hermitian."""
        return self._hermitian

    @property
    def nnz(self) -> int:
        """The number of stored nonzero entries."""
        return int(self._matrix.nnz)

    def query_row(self, k: int) -> RowEntries:
        """Get the nonzero entries of row `k`, sorted by ascending column.

        Args:
            k: the row index.

        Returns:
            The `(column, value)` pairs of the row.

        Raises:
            IndexError: if `k` is out of range.
        """
        columns, values = self.row_arrays(k)
        return [(int(j), complex(v)) for j, v in zip(columns, values)]

    def row_arrays(
        self, k: int
    ) -> tuple[npt.NDArray[np.integer[Any]], ComplexArray]:
        """Get row `k` as a pair of column and value arrays.

        Args:
            k: the row index.

        Returns:
            The column indices and values of the row. Both arrays are copies.

        Raises:
            IndexError: if `k` is out of range.
        """
        if not 0 <= k < self.dim:
            raise IndexError(f"row {k} out of range for dimension {self.dim}")
        start, end = self._matrix.indptr[k], self._matrix.indptr[k + 1]
        return (
            self._matrix.indices[start:end].copy(),
            self._matrix.data[start:end].copy(),
        )

    def matvec(self, vector: npt.ArrayLike) -> ComplexArray:
        """Multiply the matrix with a vector.

        Args:
            vector: a vector of length `N`.

        Returns:
            The product.
        """
        return np.asarray(self._matrix @ np.asarray(vector, dtype=np.complex128))

    def to_csr(self) -> scipy.sparse.csr_matrix:
        """Get a copy of the matrix in CSR format.

        Returns:
            The matrix.
        """
        return self._matrix.copy()

    def to_dense(self) -> ComplexArray:
        """Get the matrix as a dense array.

        Returns:
            The dense matrix.
        """
        return np.asarray(self._matrix.toarray())

    def transpose(self) -> SparseMatrixOracle:
        """Get the oracle of the transposed matrix.

        Returns:
            The transposed oracle.
        """
        # The transpose of a Hermitian matrix is its conjugate, also Hermitian.
        return SparseMatrixOracle(self._matrix.T, hermitian=self._hermitian or None)

    def adjoint(self) -> SparseMatrixOracle:
        """Get the oracle of the conjugate transposed matrix.

        Returns:
            The adjoint oracle.
        """
        return SparseMatrixOracle(
            self._matrix.conj().T, hermitian=self._hermitian or None
        )

    def __repr__(self) -> str:
        """Return a short description of the oracle.

        Returns:
            The description.
        """
        return (
            f"SparseMatrixOracle(dim={self.dim}, sparsity={self.sparsity}, "
            f"nnz={self.nnz}, hermitian={self.hermitian})"
        )


class CountingOracle:
    """Instrumentation wrapper counting the row queries made to an oracle.

    The count belongs to the wrapper, so the wrapped oracle stays immutable and
    can be shared. A single wrapper must not be queried from several threads.
    """

    def __init__(self, oracle: RowOracle) -> None:
        """Wrap an oracle.

        Args:
            oracle: the oracle to instrument.
        """
        self._oracle = oracle
        self._queries: int = 0

    @property
    def dim(self) -> int:
        """The dimension `N` of the wrapped matrix."""
        return self._oracle.dim

    @property
    def sparsity(self) -> int:
        """The sparsity `d` of the wrapped matrix."""
        return self._oracle.sparsity

    @property
    def queries(self) -> int:
        """The number of row queries made so far."""
        return self._queries

    def reset(self) -> None:
        """Reset the query counter to zero."""
        self._queries = 0

    def query_row(self, k: int) -> RowEntries:
        """Query a row of the wrapped oracle and count the query.

        Args:
            k: the row index.

        Returns:
            The `(column, value)` pairs of the row.
        """
        entries = self._oracle.query_row(k)
        self._queries += 1
        return entries
