# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for condition numbers and the classical solvers."""

import numpy as np
import pytest

from frequenz.qlsa.linalg import (
    ContractViolationError,
    SingularMatrixError,
    SparseMatrixOracle,
    cg_solve,
    condition_number,
    dense_solve,
    diagonal_matrix,
    eigensystem,
    hermitian_with_spectrum,
    random_sparse,
    sparse_solve,
    tridiagonal_toeplitz,
)


class TestConditionNumber:
    """Tests for `condition_number` and `eigensystem`."""

    def test_identity(self) -> None:
        """The identity has condition number one."""
        report = condition_number(SparseMatrixOracle.identity(5))
        assert report.kappa == pytest.approx(1.0)

    def test_diagonal(self) -> None:
        """A diagonal matrix has condition number max/min."""
        report = condition_number(diagonal_matrix([1.0, 10.0]))
        assert report.kappa == pytest.approx(10.0)
        assert report.sigma_max == pytest.approx(10.0)
        assert report.sigma_min == pytest.approx(1.0)

    def test_singular(self) -> None:
        """A singular matrix raises."""
        with pytest.raises(SingularMatrixError):
            condition_number(np.array([[1.0, 1.0], [1.0, 1.0]]))

    def test_prescribed_spectrum(self) -> None:
        """The eigensystem reproduces a prescribed spectrum and the matrix."""
        spectrum = [-2.0, 0.5, 1.0, 4.0]
        matrix = hermitian_with_spectrum(spectrum, np.random.default_rng(0))
        system = eigensystem(matrix, np.ones(4))
        np.testing.assert_allclose(system.eigenvalues, spectrum, atol=1e-12)
        np.testing.assert_allclose(
            system.reconstruct(), matrix.to_dense(), atol=1e-12
        )
        assert np.linalg.norm(system.expansion) == pytest.approx(2.0)
        assert condition_number(matrix).kappa == pytest.approx(8.0)

    def test_eigensystem_needs_hermitian(self) -> None:
        """Eigen-expansions of a non-Hermitian oracle are rejected."""
        with pytest.raises(ContractViolationError):
            eigensystem(SparseMatrixOracle.from_dense([[1.0, 2.0], [0.0, 1.0]]))


class TestDenseSolve:
    """Tests for the direct solvers."""

    def test_identity(self) -> None:
        """Solving with the identity returns the right-hand side."""
        rhs = np.array([1.0, 2.0 - 1j, 3.0])
        solution = dense_solve(SparseMatrixOracle.identity(3), rhs)
        np.testing.assert_allclose(solution, rhs)

    def test_diagonal(self) -> None:
        """diag(2, 4) x = (2, 4) gives x = (1, 1)."""
        np.testing.assert_allclose(
            dense_solve(np.diag([2.0, 4.0]), [2.0, 4.0]), [1.0, 1.0]
        )

    def test_residual(self) -> None:
        """A random system is solved to a relative residual of 1e-10."""
        rng = np.random.default_rng(4)
        matrix = random_sparse(32, 5, rng)
        rhs = rng.normal(size=32) + 1j * rng.normal(size=32)
        solution = dense_solve(matrix, rhs)
        residual = np.linalg.norm(matrix.matvec(solution) - rhs)
        residual /= np.linalg.norm(rhs)
        assert residual <= 1e-10

    def test_singular(self) -> None:
        """Singular matrices raise."""
        with pytest.raises(SingularMatrixError):
            dense_solve(np.zeros((2, 2)), [1.0, 1.0])

    def test_sparse_matches_dense(self) -> None:
        """The sparse direct solver agrees with the dense one."""
        matrix = tridiagonal_toeplitz(50, 4.0 + 1j, -1.0)
        rhs = np.linspace(0.0, 1.0, 50)
        np.testing.assert_allclose(
            sparse_solve(matrix, rhs), dense_solve(matrix, rhs), atol=1e-12
        )


class TestCgSolve:
    """Tests for `cg_solve`."""

    def test_identity(self) -> None:
        """CG on the identity converges in one iteration."""
        rhs = np.array([1.0, -2.0, 3.0])
        result = cg_solve(SparseMatrixOracle.identity(3), rhs)
        assert result.converged
        assert result.iterations == 1
        assert result.method == "cg"
        np.testing.assert_allclose(result.x, rhs)

    def test_zero_rhs(self) -> None:
        """A zero right-hand side is solved without iterating."""
        result = cg_solve(tridiagonal_toeplitz(4), np.zeros(4))
        assert result.converged
        assert result.iterations == 0
        np.testing.assert_array_equal(result.x, np.zeros(4))

    @pytest.mark.parametrize("dim", [64, 256])
    def test_spd_matches_dense(self, dim: int) -> None:
        """CG on an SPD system matches the dense solve."""
        matrix = tridiagonal_toeplitz(dim)
        rhs = np.random.default_rng(dim).normal(size=dim)
        result = cg_solve(matrix, rhs, tol=1e-10)
        expected = dense_solve(matrix, rhs)
        assert result.converged
        assert result.method == "cg"
        relative = np.linalg.norm(result.x - expected) / np.linalg.norm(expected)
        assert relative <= 1e-8

    def test_non_hermitian_uses_cgnr(self) -> None:
        """Non-Hermitian systems are solved on the normal equations."""
        rng = np.random.default_rng(9)
        matrix = random_sparse(24, 3, rng)
        rhs = rng.normal(size=24) + 1j * rng.normal(size=24)
        result = cg_solve(matrix, rhs, tol=1e-10)
        assert result.method == "cgnr"
        assert result.converged
        assert result.residual_norm <= 1e-9 * np.linalg.norm(rhs)

    def test_indefinite_falls_back(self) -> None:
        """An indefinite Hermitian system switches to CGNR."""
        matrix = diagonal_matrix([-1.0, -2.0, -3.0, 1.0])
        rhs = np.ones(4)
        result = cg_solve(matrix, rhs, tol=1e-10)
        assert result.method == "cgnr"
        np.testing.assert_allclose(result.x, dense_solve(matrix, rhs), atol=1e-7)

    def test_not_converged_is_flagged(self) -> None:
        """Running out of iterations is reported, not raised."""
        matrix = tridiagonal_toeplitz(64)
        result = cg_solve(matrix, np.ones(64), tol=1e-12, max_iter=3)
        assert not result.converged
        assert result.iterations == 3

    def test_invalid_arguments(self) -> None:
        """Non-positive tolerances and limits are rejected."""
        with pytest.raises(ValueError):
            cg_solve(tridiagonal_toeplitz(4), np.ones(4), tol=0.0)
        with pytest.raises(ValueError):
            cg_solve(tridiagonal_toeplitz(4), np.ones(4), max_iter=0)
