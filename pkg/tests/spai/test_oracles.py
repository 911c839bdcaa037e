# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for the preconditioned oracles and preconditioner files."""

import json
from pathlib import Path

import numpy as np
import pytest

from frequenz.qlsa.linalg import (
    CountingOracle,
    SparseMatrixOracle,
    diagonal_matrix,
    random_sparse,
    tridiagonal_toeplitz,
)
from frequenz.qlsa.spai import (
    PreconditionedOracle,
    Preconditioner,
    Side,
    assemble_preconditioner,
    build_pattern,
    load_preconditioner,
    local_preconditioned_row,
    preconditioned_rhs,
    preconditioned_rhs_element,
    preconditioned_row_oracle,
    save_preconditioner,
)


def _rows_to_dense(rows: list[list[tuple[int, complex]]], dim: int) -> np.ndarray:
    dense = np.zeros((dim, dim), dtype=np.complex128)
    for k, entries in enumerate(rows):
        for j, value in entries:
            dense[k, j] = value
    return dense


def _identity_preconditioner(dim: int) -> Preconditioner:
    return Preconditioner(
        matrix=SparseMatrixOracle.identity(dim),
        residuals=np.zeros(dim),
        side=Side.LEFT,
        level=0,
    )


class TestPreconditionedRows:
    """Tests for the row oracle of `MA`."""

    def test_identity_preconditioner(self) -> None:
        """With `M = I` the rows of `A` come back unchanged."""
        matrix = random_sparse(10, 3, np.random.default_rng(0))
        precond = _identity_preconditioner(10)
        for k in range(10):
            assert preconditioned_row_oracle(matrix, precond, k) == matrix.query_row(k)

    def test_identity_matrix(self) -> None:
        """With `A = I` the rows of `M` come back."""
        matrix = random_sparse(10, 3, np.random.default_rng(1))
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 1))
        identity = SparseMatrixOracle.identity(10)
        for k in range(10):
            assert preconditioned_row_oracle(identity, precond, k) == (
                precond.query_row(k)
            )

    @pytest.mark.parametrize("side", list(Side))
    def test_random_matches_dense(self, side: Side) -> None:
        """All rows of the composed oracle match the dense product."""
        matrix = random_sparse(32, 4, np.random.default_rng(2))
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 1, side))
        oracle = PreconditionedOracle(matrix, precond)
        dense_a = matrix.to_dense()
        dense_m = precond.matrix.to_dense()
        expected = dense_m @ dense_a if side is Side.LEFT else dense_a @ dense_m
        rows = [oracle.query_row(k) for k in range(32)]
        np.testing.assert_allclose(_rows_to_dense(rows, 32), expected, atol=1e-12)
        np.testing.assert_allclose(oracle.to_oracle().to_dense(), expected, atol=1e-12)
        assert oracle.sparsity == oracle.to_oracle().sparsity

    @pytest.mark.parametrize("level, expected", [(1, 3), (2, 5)])
    def test_query_count(self, level: int, expected: int) -> None:
        """A left-preconditioned row queries `A` once per nonzero of the row of `M`."""
        matrix = tridiagonal_toeplitz(40)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, level))
        counting = CountingOracle(matrix)
        preconditioned_row_oracle(counting, precond, 20)
        assert counting.queries == len(precond.query_row(20)) == expected
        assert counting.queries <= matrix.sparsity**level

    def test_out_of_range(self) -> None:
        """Rows outside the matrix raise."""
        precond = _identity_preconditioner(4)
        with pytest.raises(IndexError):
            preconditioned_row_oracle(tridiagonal_toeplitz(4), precond, 4)

    def test_dimension_mismatch(self) -> None:
        """Composing matrices of different sizes is rejected."""
        with pytest.raises(ValueError):
            PreconditionedOracle(tridiagonal_toeplitz(5), _identity_preconditioner(4))


class TestLocalPreconditionedRow:
    """Tests for rows of `MA` computed without assembling `M`."""

    @pytest.mark.parametrize("level", [0, 1, 2])
    def test_matches_assembled(self, level: int) -> None:
        """The on-demand rows equal the rows of the assembled product."""
        matrix = random_sparse(24, 3, np.random.default_rng(3))
        precond = assemble_preconditioner(matrix, build_pattern(matrix, level))
        for k in range(24):
            local = dict(local_preconditioned_row(matrix, k, level))
            assembled = dict(preconditioned_row_oracle(matrix, precond, k))
            assert local.keys() == assembled.keys()
            for j, value in assembled.items():
                assert local[j] == pytest.approx(value, abs=1e-12)

    @pytest.mark.parametrize("dim", [32, 256])
    def test_query_count_independent_of_dimension(self, dim: int) -> None:
        """The number of `A` queries per row is bounded by `c·d²`."""
        matrix = tridiagonal_toeplitz(dim)
        sparsity = matrix.sparsity
        for k in (0, dim // 2, dim - 1):
            counting = CountingOracle(matrix)
            local_preconditioned_row(counting, k, 2)
            assert counting.queries <= 3 * sparsity**2
        counting = CountingOracle(matrix)
        local_preconditioned_row(counting, dim // 2, 2)
        # One support query, three neighbour queries, five local and five combine.
        assert counting.queries == 1 + 3 + 5 + 5


class TestPreconditionedRhs:
    """Tests for `M b` computed element by element."""

    def test_identity(self) -> None:
        """With `M = I` the elements of `b` come back."""
        rhs = np.array([1.0, 2.0j, -3.0])
        precond = _identity_preconditioner(3)
        for j in range(3):
            assert preconditioned_rhs_element(precond, lambda i: rhs[i], j) == rhs[j]

    def test_diagonal(self) -> None:
        """A diagonal `M` scales every element."""
        matrix = diagonal_matrix([2.0, 4.0, 8.0])
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 0))
        np.testing.assert_allclose(
            preconditioned_rhs(precond, [2.0, 2.0, 2.0]), [1.0, 0.5, 0.25]
        )

    def test_random_matches_dense(self) -> None:
        """The assembled `Mb` matches the dense product."""
        rng = np.random.default_rng(4)
        matrix = random_sparse(32, 4, rng)
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 2))
        rhs = rng.normal(size=32) + 1j * rng.normal(size=32)
        np.testing.assert_allclose(
            preconditioned_rhs(precond, rhs),
            precond.matrix.to_dense() @ rhs,
            atol=1e-12,
        )

    def test_right_side_unchanged(self) -> None:
        """A right preconditioner leaves `b` alone."""
        matrix = random_sparse(8, 3, np.random.default_rng(5))
        precond = assemble_preconditioner(matrix, build_pattern(matrix, 1, Side.RIGHT))
        rhs = np.arange(8.0)
        np.testing.assert_array_equal(preconditioned_rhs(precond, rhs), rhs)

    def test_out_of_range(self) -> None:
        """Elements outside the vector raise."""
        with pytest.raises(IndexError):
            preconditioned_rhs_element(_identity_preconditioner(3), lambda i: 1.0, 3)
        with pytest.raises(ValueError):
            preconditioned_rhs(_identity_preconditioner(3), np.ones(4))


class TestSerialization:
    """Tests for saving and loading preconditioners."""

    @pytest.fixture()
    def precond(self) -> Preconditioner:
        """Create a right preconditioner of a random matrix."""
        matrix = random_sparse(16, 3, np.random.default_rng(6))
        return assemble_preconditioner(matrix, build_pattern(matrix, 2, Side.RIGHT))

    def test_save_load(self, tmp_path: Path, precond: Preconditioner) -> None:
        """A saved preconditioner loads back with its metadata."""
        save_preconditioner(tmp_path / "spai", precond)
        assert (tmp_path / "spai.mtx").exists()
        assert (tmp_path / "spai.json").exists()
        loaded = load_preconditioner(tmp_path / "spai.mtx")
        assert loaded.side is Side.RIGHT
        assert loaded.level == 2
        assert loaded.eps_pre == pytest.approx(precond.eps_pre, rel=1e-12)
        np.testing.assert_allclose(
            loaded.matrix.to_dense(), precond.matrix.to_dense(), rtol=1e-14
        )

    def test_unknown_version(self, tmp_path: Path, precond: Preconditioner) -> None:
        """Loading an unknown format version raises."""
        save_preconditioner(tmp_path / "spai", precond, file_format_version=99)
        with pytest.raises(RuntimeError, match="Unknown file format version"):
            load_preconditioner(tmp_path / "spai")

    def test_tampered_sidecar(self, tmp_path: Path, precond: Preconditioner) -> None:
        """A sidecar whose eps_pre disagrees with its residuals is rejected."""
        save_preconditioner(tmp_path / "spai", precond)
        sidecar = tmp_path / "spai.json"
        data = json.loads(sidecar.read_text())
        data["eps_pre"] = data["eps_pre"] * 2.0 + 1.0
        sidecar.write_text(json.dumps(data))
        with pytest.raises(ValueError):
            load_preconditioner(tmp_path / "spai")
