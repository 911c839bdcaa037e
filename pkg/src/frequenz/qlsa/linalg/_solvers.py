# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Classical solvers: conjugate gradients and direct verification solves.

The conjugate-gradient family is the classical baseline whose iteration counts
the preconditioner is measured against. Direct solves are the reference every
quantum result is checked with.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Literal, Protocol

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from ._condition import _densify
from ._exceptions import SingularMatrixError
from ._oracle import ComplexArray, SparseMatrixOracle

_logger = logging.getLogger(__name__)

CgMethod = Literal["cg", "pcg", "cgnr"]
"""The conjugate-gradient variant that produced a solution."""

DENSE_RESIDUAL_TOLERANCE = 1e-10
"""Relative residual a direct dense solve must reach."""


class SparsePreconditioner(Protocol):
    """Anything that can hand out an approximate inverse as a sparse matrix."""

    def to_csr(self) -> scipy.sparse.csr_matrix:
        """Get the approximate inverse `M`."""


@dataclass(frozen=True)
class CgResult:
    """Outcome of a conjugate-gradient solve."""

    x: ComplexArray
    """The last iterate."""

    iterations: int
    """The number of iterations performed by `method`."""

    converged: bool
    """Whether the relative residual reached the requested tolerance."""

    residual_norm: float
    """The residual norm `‖Ax − b‖` of `x`."""

    method: CgMethod
    """The variant used."""


class _CurvatureBreakdown(Exception):
    """Non-positive or complex curvature met during CG."""


def _cg(
    matrix: scipy.sparse.csr_matrix,
    rhs: ComplexArray,
    tol: float,
    max_iter: int,
    preconditioner: scipy.sparse.csr_matrix | None,
) -> tuple[ComplexArray, int, bool]:
    rhs_norm = float(np.linalg.norm(rhs))
    x = np.zeros_like(rhs)
    residual = rhs.copy()
    z = residual if preconditioner is None else preconditioner @ residual
    direction = z.copy()
    rz = np.vdot(residual, z)
    for iteration in range(1, max_iter + 1):
        product = matrix @ direction
        curvature = np.vdot(direction, product)
        if curvature.real <= 0.0 or abs(curvature.imag) > 1e-8 * abs(curvature):
            raise _CurvatureBreakdown(f"curvature {curvature} at iteration {iteration}")
        alpha = rz / curvature
        x = x + alpha * direction
        residual = residual - alpha * product
        if np.linalg.norm(residual) <= tol * rhs_norm:
            return x, iteration, True
        z = residual if preconditioner is None else preconditioner @ residual
        rz_next = np.vdot(residual, z)
        if rz_next.real <= 0.0:
            raise _CurvatureBreakdown(f"preconditioner not positive at {iteration}")
        direction = z + (rz_next / rz) * direction
        rz = rz_next
    return x, max_iter, False


def _cgnr(
    matrix: scipy.sparse.csr_matrix,
    rhs: ComplexArray,
    tol: float,
    max_iter: int,
    preconditioner: scipy.sparse.csr_matrix | None,
) -> tuple[ComplexArray, int, bool]:
    rhs_norm = float(np.linalg.norm(rhs))
    system = matrix if preconditioner is None else preconditioner @ matrix
    system_rhs = rhs if preconditioner is None else preconditioner @ rhs
    adjoint = system.conj().T.tocsr()
    x = np.zeros_like(rhs)
    residual = system_rhs.copy()
    z = adjoint @ residual
    direction = z.copy()
    zz = float(np.vdot(z, z).real)
    for iteration in range(1, max_iter + 1):
        product = system @ direction
        alpha = zz / float(np.vdot(product, product).real)
        x = x + alpha * direction
        residual = residual - alpha * product
        true_residual = rhs - matrix @ x if preconditioner is not None else residual
        if np.linalg.norm(true_residual) <= tol * rhs_norm:
            return x, iteration, True
        z = adjoint @ residual
        zz_next = float(np.vdot(z, z).real)
        if zz_next == 0.0:
            return x, iteration, False
        direction = z + (zz_next / zz) * direction
        zz = zz_next
    return x, max_iter, False


def cg_solve(
    matrix: SparseMatrixOracle,
    rhs: npt.ArrayLike,
    *,
    tol: float = 1e-10,
    max_iter: int | None = None,
    preconditioner: SparsePreconditioner | None = None,
) -> CgResult:
    """Solve `A x = b` with the appropriate conjugate-gradient variant.

    Hermitian matrices are tried with CG, preconditioned with the Hermitian part
    of `M` when a preconditioner is given. Non-Hermitian matrices, and
    Hermitian ones that turn out not to be positive definite, are solved with
    CG on the normal equations of the left-preconditioned system `M A x = M b`.

    Non-convergence is not an error: it is flagged in the result and logged.

    Args:
        matrix: the system matrix `A`.
        rhs: the right-hand side `b`.
        tol: the relative residual tolerance.
        max_iter: the iteration limit. Defaults to ten times the dimension.
        preconditioner: an optional approximate inverse `M`.

    Returns:
        The solve result.

    Raises:
        ValueError: if `tol` or `max_iter` are not positive.
    """
    if tol <= 0.0:
        raise ValueError(f"tol ({tol}) must be positive")
    limit = 10 * matrix.dim if max_iter is None else max_iter
    if limit < 1:
        raise ValueError(f"max_iter ({limit}) must be positive")

    csr = matrix.to_csr()
    vector = np.asarray(rhs, dtype=np.complex128)
    if not np.any(vector):
        return CgResult(
            x=np.zeros_like(vector),
            iterations=0,
            converged=True,
            residual_norm=0.0,
            method="cg" if preconditioner is None else "pcg",
        )

    approximate_inverse = None if preconditioner is None else preconditioner.to_csr()
    method: CgMethod
    if matrix.hermitian:
        method = "cg" if approximate_inverse is None else "pcg"
        hermitian_part = (
            None
            if approximate_inverse is None
            else ((approximate_inverse + approximate_inverse.conj().T) * 0.5).tocsr()
        )
        try:
            x, iterations, converged = _cg(csr, vector, tol, limit, hermitian_part)
        except _CurvatureBreakdown as err:
            _logger.info("%s broke down (%s), switching to CGNR", method, err)
            method = "cgnr"
            x, iterations, converged = _cgnr(
                csr, vector, tol, limit, approximate_inverse
            )
    else:
        method = "cgnr"
        x, iterations, converged = _cgnr(csr, vector, tol, limit, approximate_inverse)

    residual_norm = float(np.linalg.norm(vector - csr @ x))
    if not converged:
        _logger.warning(
            "%s did not converge in %d iterations, relative residual %g",
            method,
            iterations,
            residual_norm / float(np.linalg.norm(vector)),
        )
    return CgResult(
        x=np.asarray(x),
        iterations=iterations,
        converged=converged,
        residual_norm=residual_norm,
        method=method,
    )


def dense_solve(
    matrix: SparseMatrixOracle | npt.ArrayLike, rhs: npt.ArrayLike
) -> ComplexArray:
    """Solve `A x = b` with a dense LU factorization.

    One step of iterative refinement is applied when the first solution
    misses the residual target.

    Args:
        matrix: the system matrix, as an oracle or a dense array.
        rhs: the right-hand side.

    Returns:
        The solution.

    Raises:
        SingularMatrixError: if the matrix is singular to working precision.
    """
    dense = _densify(matrix)
    vector = np.asarray(rhs, dtype=np.complex128)
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            factorization = scipy.linalg.lu_factor(dense)
        except (scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as err:
            raise SingularMatrixError(f"dense solve failed: {err}") from err
    if np.any(np.diag(factorization[0]) == 0.0):
        raise SingularMatrixError("dense solve failed: exactly singular factor")
    solution = scipy.linalg.lu_solve(factorization, vector)
    target = DENSE_RESIDUAL_TOLERANCE * float(np.linalg.norm(vector))
    residual = vector - dense @ solution
    if np.linalg.norm(residual) > target:
        solution = solution + scipy.linalg.lu_solve(factorization, residual)
        residual = vector - dense @ solution
        if np.linalg.norm(residual) > target:
            _logger.warning(
                "dense solve residual %g above target %g",
                float(np.linalg.norm(residual)),
                target,
            )
    return np.asarray(solution, dtype=np.complex128)


def sparse_solve(matrix: SparseMatrixOracle, rhs: npt.ArrayLike) -> ComplexArray:
    """Solve `A x = b` with a sparse direct solver.

    Used for systems above the dense cap, such as fine FEM meshes.

    Args:
        matrix: the system matrix.
        rhs: the right-hand side.

    Returns:
        The solution.

    Raises:
        SingularMatrixError: if the factorization detects a singular matrix.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.sparse.linalg.MatrixRankWarning)
        try:
            solution = scipy.sparse.linalg.spsolve(
                matrix.to_csr().tocsc(), np.asarray(rhs, dtype=np.complex128)
            )
        except scipy.sparse.linalg.MatrixRankWarning as err:
            raise SingularMatrixError(f"sparse solve failed: {err}") from err
    solution = np.asarray(solution, dtype=np.complex128)
    if not np.all(np.isfinite(solution)):
        raise SingularMatrixError("sparse solve produced non-finite values")
    return solution
