# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Hermitian dilation of general square matrices.

A general matrix `A` can't be used directly as a Hamiltonian. Its dilation

```
H = [[0,  A],
     [A†, 0]]
```

is Hermitian, has spectrum `{±σ_i}` for the singular values `σ_i` of `A`, and
solving `H y = (b, 0)` gives `y = (0, x)` with `A x = b`.
"""

import numpy as np
import numpy.typing as npt
import scipy.sparse

from ._oracle import ComplexArray, SparseMatrixOracle


def hermitian_dilation(matrix: SparseMatrixOracle) -> SparseMatrixOracle:
    """Build the Hermitian dilation of a square matrix.

    Args:
        matrix: the matrix `A` of dimension `N`.

    Returns:
        The oracle of the `2N`-dimensional Hermitian dilation.
    """
    csr = matrix.to_csr()
    dilated = scipy.sparse.bmat([[None, csr], [csr.conj().T, None]], format="csr")
    return SparseMatrixOracle(dilated, hermitian=True)


def dilate_rhs(rhs: npt.ArrayLike) -> ComplexArray:
    """Embed a right-hand side `b` as `(b, 0)` for the dilated system.

    Args:
        rhs: the right-hand side of length `N`.

    Returns:
        The vector of length `2N`.
    """
    vector = np.asarray(rhs, dtype=np.complex128)
    return np.concatenate([vector, np.zeros_like(vector)])


def dilate_solution(solution: npt.ArrayLike) -> ComplexArray:
    """Embed a solution `x` as `(0, x)`, the solution of the dilated system.

    Args:
        solution: the solution of length `N`.

    Returns:
        The vector of length `2N`.
    """
    vector = np.asarray(solution, dtype=np.complex128)
    return np.concatenate([np.zeros_like(vector), vector])


def extract_solution(dilated: npt.ArrayLike) -> ComplexArray:
    """Get `x` out of the solution `(0, x)` of a dilated system.

    Args:
        dilated: a vector of even length `2N`.

    Returns:
        The lower block of length `N`.

    Raises:
        ValueError: if the vector length is odd.
    """
    vector = np.asarray(dilated, dtype=np.complex128)
    if vector.shape[0] % 2:
        raise ValueError(f"dilated vectors have even length, got {vector.shape[0]}")
    return vector[vector.shape[0] // 2 :].copy()
