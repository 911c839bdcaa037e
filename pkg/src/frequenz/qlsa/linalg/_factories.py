# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Test and benchmark matrix families."""

import numpy as np
import numpy.typing as npt
import scipy.sparse
import scipy.stats

from ._oracle import SparseMatrixOracle


def tridiagonal_toeplitz(
    dim: int, diagonal: complex = 2.0, off_diagonal: complex = -1.0
) -> SparseMatrixOracle:
    """Create a tridiagonal Toeplitz matrix.

    Args:
        dim: the dimension.
        diagonal: the value on the main diagonal.
        off_diagonal: the value on both neighbouring diagonals.

    Returns:
        The matrix oracle.
    """
    matrix = scipy.sparse.diags(
        [off_diagonal, diagonal, off_diagonal],
        offsets=[-1, 0, 1],
        shape=(dim, dim),
        dtype=np.complex128,
    )
    return SparseMatrixOracle(matrix)


def diagonal_matrix(values: npt.ArrayLike) -> SparseMatrixOracle:
    """Create a diagonal matrix.

    Args:
        values: the diagonal entries.

    Returns:
        The matrix oracle.
    """
    return SparseMatrixOracle(
        scipy.sparse.diags(np.asarray(values, dtype=np.complex128), format="csr")
    )


def random_hermitian(
    dim: int, sparsity: int, rng: np.random.Generator
) -> SparseMatrixOracle:
    """Create a random sparse Hermitian matrix.

    The matrix has a real random diagonal plus `sparsity - 1` random perfect
    matchings of complex off-diagonal pairs, so no row has more than
    `sparsity` nonzero entries.

    Args:
        dim: the dimension.
        sparsity: the maximum number of nonzero entries per row.
        rng: the random generator.

    Returns:
        The matrix oracle.

    Raises:
        ValueError: if `sparsity` is not positive.
    """
    if sparsity < 1:
        raise ValueError(f"sparsity ({sparsity}) must be positive")
    rows = list(range(dim))
    cols = list(range(dim))
    values: list[complex] = list(rng.normal(size=dim).astype(np.complex128))
    for _ in range(sparsity - 1):
        order = rng.permutation(dim)
        for first, second in zip(order[0::2], order[1::2]):
            value = complex(rng.normal(), rng.normal())
            rows.extend([int(first), int(second)])
            cols.extend([int(second), int(first)])
            values.extend([value, value.conjugate()])
    matrix = scipy.sparse.coo_matrix((values, (rows, cols)), shape=(dim, dim))
    return SparseMatrixOracle(matrix.tocsr(), hermitian=True)


def random_sparse(
    dim: int, sparsity: int, rng: np.random.Generator
) -> SparseMatrixOracle:
    """Create a random sparse complex matrix with a dominant diagonal.

    Args:
        dim: the dimension.
        sparsity: the maximum number of nonzero entries per row.
        rng: the random generator.

    Returns:
        The matrix oracle.

    Raises:
        ValueError: if `sparsity` is not positive.
    """
    if sparsity < 1:
        raise ValueError(f"sparsity ({sparsity}) must be positive")
    rows: list[int] = []
    cols: list[int] = []
    values: list[complex] = []
    for k in range(dim):
        candidates = [j for j in range(dim) if j != k]
        others = rng.choice(
            candidates, size=min(sparsity - 1, dim - 1), replace=False
        )
        row_values = rng.normal(size=len(others)) + 1j * rng.normal(size=len(others))
        rows.extend([k] * (len(others) + 1))
        cols.extend([k, *(int(j) for j in others)])
        values.extend([complex(1.0 + np.abs(row_values).sum()), *row_values])
    matrix = scipy.sparse.coo_matrix((values, (rows, cols)), shape=(dim, dim))
    return SparseMatrixOracle(matrix.tocsr())


def hermitian_with_spectrum(
    eigenvalues: npt.ArrayLike, rng: np.random.Generator
) -> SparseMatrixOracle:
    """Create a dense Hermitian matrix with a prescribed spectrum.

    Args:
        eigenvalues: the real eigenvalues.
        rng: the random generator used for the Haar-random eigenbasis.

    Returns:
        The matrix oracle.
    """
    spectrum = np.asarray(eigenvalues, dtype=np.float64)
    basis = scipy.stats.unitary_group.rvs(len(spectrum), random_state=rng)
    matrix = (basis * spectrum) @ basis.conj().T
    matrix = 0.5 * (matrix + matrix.conj().T)
    return SparseMatrixOracle(matrix, hermitian=True)
