# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Classical sparse and dense complex linear algebra.

Matrices are accessed through row-query oracles
([`SparseMatrixOracle`][frequenz.qlsa.linalg.SparseMatrixOracle]), the
black-box access model the quantum algorithm assumes. On top of them this
package offers the Hermitian dilation of general matrices, their 1-sparse
decomposition for Hamiltonian simulation, condition number measurement and
the classical solvers used as baseline and verification oracle.
"""

from ._condition import ConditionReport, Eigensystem, condition_number, eigensystem
from ._decomposition import OneSparseTerm, one_sparse_decomposition
from ._dilation import (
    dilate_rhs,
    dilate_solution,
    extract_solution,
    hermitian_dilation,
)
from ._exceptions import ContractViolationError, LinalgError, SingularMatrixError
from ._factories import (
    diagonal_matrix,
    hermitian_with_spectrum,
    random_hermitian,
    random_sparse,
    tridiagonal_toeplitz,
)
from ._io import read_matrix_market, read_vector, write_matrix_market, write_vector
from ._oracle import (
    ComplexArray,
    CountingOracle,
    RowEntries,
    RowOracle,
    SparseMatrixOracle,
)
from ._solvers import (
    CgMethod,
    CgResult,
    SparsePreconditioner,
    cg_solve,
    dense_solve,
    sparse_solve,
)

__all__ = [
    "CgMethod",
    "CgResult",
    "ComplexArray",
    "ConditionReport",
    "ContractViolationError",
    "CountingOracle",
    "Eigensystem",
    "LinalgError",
    "OneSparseTerm",
    "RowEntries",
    "RowOracle",
    "SingularMatrixError",
    "SparseMatrixOracle",
    "SparsePreconditioner",
    "cg_solve",
    "condition_number",
    "dense_solve",
    "diagonal_matrix",
    "dilate_rhs",
    "dilate_solution",
    "eigensystem",
    "extract_solution",
    "hermitian_dilation",
    "hermitian_with_spectrum",
    "one_sparse_decomposition",
    "random_hermitian",
    "random_sparse",
    "read_matrix_market",
    "read_vector",
    "sparse_solve",
    "tridiagonal_toeplitz",
    "write_matrix_market",
    "write_vector",
]
