# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for sparsity patterns, local problems and SPAI assembly."""

import numpy as np
import pytest
import scipy.linalg

from frequenz.qlsa.linalg import (
    SparseMatrixOracle,
    cg_solve,
    condition_number,
    diagonal_matrix,
    random_sparse,
    tridiagonal_toeplitz,
)
from frequenz.qlsa.spai import (
    Preconditioner,
    Side,
    SpaiLocalProblem,
    SparsityPattern,
    assemble_preconditioner,
    bound_check,
    build_pattern,
    solve_local,
    source_oracle,
)


def _spd_tridiagonal(dim: int) -> SparseMatrixOracle:
    """Create an SPD tridiagonal matrix with a varying diagonal."""
    diagonal = 4.0 + np.sin(np.arange(dim))
    dense = np.diag(diagonal) - np.eye(dim, k=1) - np.eye(dim, k=-1)
    return SparseMatrixOracle.from_dense(dense)


def _full_pattern(dim: int, side: Side) -> SparsityPattern:
    # Unrestricted supports, only meant for checking against the dense inverse.
    return SparsityPattern(
        level=2, side=side, supports=tuple(tuple(range(dim)) for _ in range(dim))
    )


class TestSparsityPattern:
    """Tests for `build_pattern`."""

    def test_level_zero(self) -> None:
        """Level 0 is the diagonal."""
        pattern = build_pattern(random_sparse(10, 3, np.random.default_rng(0)), 0)
        assert pattern.supports == tuple((k,) for k in range(10))

    def test_tridiagonal_levels(self) -> None:
        """Level 1 of a tridiagonal matrix is tridiagonal, level 2 pentadiagonal."""
        matrix = tridiagonal_toeplitz(8)
        level1 = build_pattern(matrix, 1)
        level2 = build_pattern(matrix, 2)
        assert level1.support(0) == (0, 1)
        assert level1.support(4) == (3, 4, 5)
        assert level2.support(0) == (0, 1, 2)
        assert level2.support(4) == (2, 3, 4, 5, 6)

    @pytest.mark.parametrize("side", list(Side))
    def test_nesting(self, side: Side) -> None:
        """Supports grow with the level."""
        matrix = random_sparse(20, 3, np.random.default_rng(1))
        patterns = [build_pattern(matrix, level, side) for level in (0, 1, 2)]
        for k in range(20):
            assert set(patterns[0].support(k)) <= set(patterns[1].support(k))
            assert set(patterns[1].support(k)) <= set(patterns[2].support(k))

    def test_invalid_level(self) -> None:
        """Only levels 0, 1 and 2 exist."""
        with pytest.raises(ValueError):
            build_pattern(tridiagonal_toeplitz(4), 3)

    def test_invalid_support(self) -> None:
        """Out of range supports are rejected."""
        with pytest.raises(ValueError):
            SparsityPattern(level=1, side=Side.LEFT, supports=((0, 2), (1,)))


class TestSolveLocal:
    """Tests for the local least-squares problems."""

    def test_identity(self) -> None:
        """The identity gives unit vectors with zero residual."""
        matrix = SparseMatrixOracle.identity(5)
        solution = solve_local(matrix, build_pattern(matrix, 1), 2)
        assert solution.columns == (2,)
        np.testing.assert_allclose(solution.values, [1.0])
        assert solution.residual == pytest.approx(0.0, abs=1e-15)

    def test_diagonal(self) -> None:
        """A diagonal matrix gives the inverse diagonal."""
        matrix = diagonal_matrix([2.0, -4.0, 0.5j])
        pattern = build_pattern(matrix, 1)
        for k, expected in enumerate([0.5, -0.25, -2.0j]):
            solution = solve_local(matrix, pattern, k)
            np.testing.assert_allclose(solution.values, [expected])
            assert solution.residual == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("side", list(Side))
    def test_full_support_is_inverse(self, side: Side) -> None:
        """With an unrestricted support the exact inverse is recovered."""
        matrix = _spd_tridiagonal(12)
        inverse = np.linalg.inv(matrix.to_dense())
        pattern = _full_pattern(12, side)
        for k in range(12):
            solution = solve_local(matrix, pattern, k)
            expected = inverse[k, :] if side is Side.LEFT else inverse[:, k]
            np.testing.assert_allclose(solution.values, expected, atol=1e-10)
            assert solution.residual < 1e-10

    def test_normal_equations_certificate(self) -> None:
        """The local solution satisfies the normal equations."""
        matrix = random_sparse(30, 4, np.random.default_rng(2))
        oracle = source_oracle(matrix, Side.LEFT)
        pattern = build_pattern(matrix, 1)
        for k in range(30):
            problem = SpaiLocalProblem.from_oracle(oracle, k, pattern.support(k))
            solution = problem.solve()
            scale = np.linalg.norm(problem.matrix, 2)
            assert problem.normal_residual(solution.values) <= 1e-8 * scale
            assert len(problem.rows) <= matrix.sparsity * len(problem.columns) + 1

    def test_rank_deficient(self) -> None:
        """A rank-deficient local matrix gives the flagged minimum-norm solution."""
        # Rows 0 and 1 are equal, so columns 0 and 1 of Aᵀ coincide.
        matrix = SparseMatrixOracle.from_dense(
            [[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        )
        pattern = SparsityPattern(
            level=1, side=Side.LEFT, supports=((0, 1), (0, 1), (2,))
        )
        solution = solve_local(matrix, pattern, 0)
        assert solution.rank_deficient
        np.testing.assert_allclose(solution.values, [0.25, 0.25], atol=1e-12)

    def test_out_of_range(self) -> None:
        """Indices outside the matrix raise."""
        matrix = tridiagonal_toeplitz(4)
        with pytest.raises(IndexError):
            solve_local(matrix, build_pattern(matrix, 1), 4)


class TestAssemblePreconditioner:
    """Tests for `assemble_preconditioner` and `bound_check`."""

    @pytest.mark.parametrize("level", [0, 1, 2])
    def test_identity(self, level: int) -> None:
        """The identity is its own approximate inverse."""
        matrix = SparseMatrixOracle.identity(6)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, level))
        np.testing.assert_allclose(precond.matrix.to_dense(), np.eye(6))
        assert precond.eps_pre == pytest.approx(0.0, abs=1e-15)

    def test_diagonal(self) -> None:
        """A diagonal matrix gets its exact inverse."""
        values = np.array([1.0, 2.0, 4.0, -8.0])
        matrix = diagonal_matrix(values)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 0))
        np.testing.assert_allclose(precond.matrix.to_dense(), np.diag(1.0 / values))
        assert precond.eps_pre == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("side", list(Side))
    def test_frobenius_objective(self, side: Side) -> None:
        """The sum of squared residuals is the Frobenius objective."""
        matrix = _spd_tridiagonal(64)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 1, side))
        dense_a = matrix.to_dense()
        dense_m = precond.matrix.to_dense()
        product = dense_m @ dense_a if side is Side.LEFT else dense_a @ dense_m
        expected = np.linalg.norm(product - np.eye(64), "fro") ** 2
        assert precond.frobenius_objective == pytest.approx(expected, rel=1e-10)
        assert precond.eps_pre == pytest.approx(np.max(precond.residuals))

    def test_support_matches_pattern(self) -> None:
        """Every row of a left preconditioner lives on its pattern entry."""
        matrix = random_sparse(24, 3, np.random.default_rng(3))
        pattern = build_pattern(matrix, 2)
        precond = assemble_preconditioner(matrix, pattern)
        for k in range(24):
            columns = {j for j, _ in precond.query_row(k)}
            assert columns <= set(pattern.support(k))

    def test_parallel_is_identical(self) -> None:
        """Solving on a thread pool gives a bitwise identical result."""
        matrix = random_sparse(40, 4, np.random.default_rng(4))
        pattern = build_pattern(matrix, 2)
        sequential = assemble_preconditioner(matrix, pattern)
        parallel = assemble_preconditioner(matrix, pattern, max_workers=4)
        np.testing.assert_array_equal(
            sequential.matrix.to_dense(), parallel.matrix.to_dense()
        )
        np.testing.assert_array_equal(sequential.residuals, parallel.residuals)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_monotone_in_level(self, seed: int) -> None:
        """A larger pattern never gives a larger residual."""
        matrix = random_sparse(30, 3, np.random.default_rng(seed))
        eps = [
            assemble_preconditioner(matrix, build_pattern(matrix, level)).eps_pre
            for level in (0, 1, 2)
        ]
        assert eps[2] <= eps[1] + 1e-12
        assert eps[1] <= eps[0] + 1e-12

    def test_bound_values(self) -> None:
        """The bound follows `(1 + s)/(1 - s)` with `s = √d·eps_pre`."""
        matrix = SparseMatrixOracle.identity(4)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 0))
        assert bound_check(precond, 3) == (True, pytest.approx(1.0))

        # eps_pre = 1/6 with d = 4 gives s = 1/3.
        residuals = np.array([0.1, 1.0 / 6.0, 0.0, 0.05])
        scaled = Preconditioner(
            matrix=precond.matrix, residuals=residuals, side=Side.LEFT, level=0
        )
        check = bound_check(scaled, 4)
        assert check.applicable
        assert check.bound == pytest.approx(2.0)
        assert bound_check(scaled, 36) == (False, None)

    @pytest.mark.parametrize("dim", [16, 48])
    @pytest.mark.parametrize("level", [0, 1])
    def test_bound_holds(self, dim: int, level: int) -> None:
        """Whenever the bound applies, the measured κ(MA) respects it."""
        matrix = tridiagonal_toeplitz(dim, 4.0, -1.0)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, level))
        check = bound_check(precond, matrix.sparsity)
        assert check.applicable
        assert check.bound is not None
        product = precond.matrix.to_dense() @ matrix.to_dense()
        kappa = condition_number(product).kappa
        assert kappa <= check.bound
        if level == 1:
            assert kappa < condition_number(matrix).kappa

    def test_reduces_cg_iterations(self) -> None:
        """Preconditioned CG needs fewer iterations than plain CG."""
        matrix = _spd_tridiagonal(64)
        rhs = np.random.default_rng(5).normal(size=64)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 1))
        plain = cg_solve(matrix, rhs, tol=1e-10)
        preconditioned = cg_solve(matrix, rhs, tol=1e-10, preconditioner=precond)
        assert plain.converged and preconditioned.converged
        assert preconditioned.method == "pcg"
        assert preconditioned.iterations < plain.iterations
        np.testing.assert_allclose(
            preconditioned.x, scipy.linalg.solve(matrix.to_dense(), rhs), atol=1e-8
        )
