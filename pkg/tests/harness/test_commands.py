# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for the experiment commands."""

import math
import pathlib
from typing import Any

import numpy as np
import pytest

from frequenz.qlsa.harness import (
    ConfigError,
    NumericalFailure,
    RunConfig,
    build_system,
    cmd_qlsa,
    cmd_rcs,
    cmd_solve,
    cmd_spai,
    parse_config,
    precondition,
    qlsa_params,
)
from frequenz.qlsa.linalg import dense_solve, tridiagonal_toeplitz
from frequenz.qlsa.spai import (
    Preconditioner,
    Side,
    assemble_preconditioner,
    build_pattern,
)


def _config(matrix: dict[str, Any], **sections: Any) -> RunConfig:
    return parse_config(
        {"experiment": "test", "seed": 5, "matrix": matrix, **sections}
    )


class TestBuildSystem:
    """Tests for `build_system`."""

    def test_seeded(self) -> None:
        """The same seed builds the same system, another seed another one."""
        matrix = {"source": "random_hermitian", "size": 8, "sparsity": 2}
        first = build_system(_config(matrix))
        second = build_system(_config(matrix))
        other = build_system(_config(matrix).with_overrides(seed=6))
        np.testing.assert_array_equal(first.matrix.to_dense(), second.matrix.to_dense())
        np.testing.assert_array_equal(first.rhs, second.rhs)
        assert not np.array_equal(first.rhs, other.rhs)

    def test_on_grid(self) -> None:
        """On-grid spectra are multiples of `2π/t0`."""
        config = _config(
            {"source": "random_hermitian", "size": 8},
            qlsa={"on_grid": True, "t0": 2.0 * math.pi, "clock_qubits": 3},
        )
        eigenvalues = np.linalg.eigvalsh(build_system(config).matrix.to_dense())
        np.testing.assert_allclose(eigenvalues, np.round(eigenvalues), atol=1e-10)
        assert np.all(np.abs(eigenvalues) >= 1.0 - 1e-10)
        assert np.all(np.abs(eigenvalues) <= 3.0 + 1e-10)

    def test_vector_files(self, tmp_path: pathlib.Path) -> None:
        """Right-hand sides are read from files and their length checked."""
        (tmp_path / "rhs.txt").write_text("1.0\n-2.0\n0.5\n")
        config = _config(
            {"source": "tridiagonal", "size": 3, "rhs": str(tmp_path / "rhs.txt")}
        )
        np.testing.assert_array_equal(build_system(config).rhs, [1.0, -2.0, 0.5])
        wrong = _config(
            {"source": "tridiagonal", "size": 4, "rhs": str(tmp_path / "rhs.txt")}
        )
        with pytest.raises(ConfigError, match="expected 4"):
            build_system(wrong)

    def test_scattering(self) -> None:
        """Scattering problems read out the conjugated far field."""
        system = build_system(_config({"source": "fem_slab", "size": 16}))
        assert system.scattering is not None
        assert system.dim == 16
        np.testing.assert_array_equal(
            system.reference, np.conj(system.scattering.far_field)
        )

    def test_right_preconditioning(self) -> None:
        """A right inverse keeps the readout value `⟨R'|x⟩`."""
        system = build_system(_config({"source": "tridiagonal", "size": 12}))
        matrix = system.matrix
        precond: Preconditioner = assemble_preconditioner(
            matrix, build_pattern(matrix, 1, Side.RIGHT)
        )
        right = precondition(system, precond)
        y = dense_solve(right.matrix, right.rhs)
        x = dense_solve(matrix, system.rhs)
        assert np.vdot(right.reference, y) == pytest.approx(
            np.vdot(system.reference, x), rel=1e-10
        )


class TestQlsaParams:
    """Tests for the `t0` and `C` policies."""

    def test_kappa(self) -> None:
        """The `kappa` policy maps `‖H‖` to the top of the clock range."""
        config = _config({"source": "identity", "size": 4}, qlsa={"clock_qubits": 4})
        params = qlsa_params(config, tridiagonal_toeplitz(4, 3.0, 0.0))
        assert params.t0 == pytest.approx(math.pi * 15 / 3.0)
        assert params.constant == pytest.approx(2.0 * math.pi / params.t0)

    def test_constant_too_large(self) -> None:
        """`C` above the grid minimum is a configuration error."""
        config = _config(
            {"source": "identity", "size": 4},
            qlsa={"t0": 2.0 * math.pi, "inversion_constant": 2.0},
        )
        with pytest.raises(ConfigError):
            qlsa_params(config, tridiagonal_toeplitz(4, 1.0, 0.0))


class TestSolve:
    """Tests for `cmd_solve`."""

    def test_identity(self) -> None:
        """The identity is solved in one iteration."""
        record = cmd_solve(_config({"source": "identity", "size": 8}))
        assert record.command == "solve"
        assert record.converged
        assert record.iterations == 1
        assert record.kappa == pytest.approx(1.0)
        assert record.solution_error is not None
        assert record.solution_error < 1e-12

    def test_matches_dense(self) -> None:
        """CG agrees with the dense solve on an SPD matrix."""
        record = cmd_solve(_config({"source": "tridiagonal", "size": 32}))
        assert record.converged
        assert record.solution_error is not None
        assert record.solution_error < 1e-6

    def test_preconditioned_slab(self) -> None:
        """The approximate inverse saves iterations on the wall problem."""
        record = cmd_solve(
            _config({"source": "fem_slab", "size": 64}, spai={}, cg={"tol": 1e-8})
        )
        assert record.iterations is not None
        assert record.iterations_preconditioned is not None
        assert record.iterations_preconditioned < record.iterations
        assert record.kappa_preconditioned is not None
        assert record.kappa is not None
        assert record.kappa_preconditioned < record.kappa
        assert record.rcs_classical == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-2)
        assert record.rcs_reference == pytest.approx(1.0 / (4.0 * math.pi))

    def test_not_converged(self) -> None:
        """Non-convergence is flagged, not raised."""
        record = cmd_solve(
            _config({"source": "tridiagonal", "size": 64}, cg={"max_iter": 2})
        )
        assert record.converged is False
        assert record.iterations == 2

    def test_singular(self, tmp_path: pathlib.Path) -> None:
        """A singular matrix is a numerical failure."""
        path = tmp_path / "singular.mtx"
        path.write_text(
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n"
        )
        with pytest.raises(NumericalFailure):
            cmd_solve(_config({"source": "file", "path": str(path)}))


class TestSpai:
    """Tests for `cmd_spai`."""

    def test_identity(self) -> None:
        """The identity is its own inverse."""
        record = cmd_spai(_config({"source": "identity", "size": 8}))
        assert record.eps_pre == pytest.approx(0.0, abs=1e-14)
        assert record.bound_applicable
        assert record.spectral_bound == pytest.approx(1.0)
        assert record.kappa_preconditioned == pytest.approx(1.0)

    def test_bound_holds(self) -> None:
        """The measured condition number respects the bound."""
        record = cmd_spai(
            _config(
                {"source": "tridiagonal", "size": 32, "diagonal": 4.0},
                spai={"level": 1},
            )
        )
        assert record.bound_applicable
        assert record.kappa_preconditioned is not None
        assert record.spectral_bound is not None
        assert record.kappa_preconditioned <= record.spectral_bound

    def test_levels(self) -> None:
        """A wider pattern never has a larger residual."""
        matrix = {"source": "tridiagonal", "size": 32, "diagonal": 3.0}
        level_1 = cmd_spai(_config(matrix, spai={"level": 1}))
        level_2 = cmd_spai(_config(matrix, spai={"level": 2}))
        assert level_1.eps_pre is not None
        assert level_2.eps_pre is not None
        assert level_2.eps_pre <= level_1.eps_pre + 1e-12


class TestQlsa:
    """Tests for `cmd_qlsa`."""

    def test_identity(self) -> None:
        """The identity is solved exactly with an on-grid time scale."""
        record = cmd_qlsa(
            _config(
                {"source": "identity", "size": 4},
                qlsa={"clock_qubits": 3, "t0": 2.0 * math.pi},
            )
        )
        assert record.fidelity == pytest.approx(1.0, abs=1e-9)
        assert record.overlap == pytest.approx(record.overlap_dense, rel=1e-8)
        assert record.clock_leakage == pytest.approx(0.0, abs=1e-12)
        assert record.oracle_queries is not None and record.oracle_queries > 0

    def test_on_grid(self) -> None:
        """On-grid random systems are solved to high fidelity, reproducibly."""
        config = _config(
            {"source": "random_hermitian", "size": 8},
            qlsa={"clock_qubits": 4, "t0": 2.0 * math.pi, "on_grid": True},
        )
        record = cmd_qlsa(config)
        assert record.fidelity is not None
        assert record.fidelity >= 1.0 - 1e-8
        assert record.overlap == pytest.approx(record.overlap_dense, rel=1e-6)
        assert cmd_qlsa(config).deterministic() == record.deterministic()

    def test_estimated(self) -> None:
        """Amplitude estimation adds error bounds and Grover iterations."""
        record = cmd_qlsa(
            _config(
                {"source": "identity", "size": 4},
                qlsa={"clock_qubits": 3, "t0": 2.0 * math.pi, "bits": 6},
            )
        )
        assert record.p_1110_error is not None
        assert record.grover_iterations is not None
        assert record.grover_iterations > 0

    def test_trotter(self) -> None:
        """More product formula steps shrink the evolution error quadratically."""
        errors: list[float] = []
        for steps in (8, 32):
            record = cmd_qlsa(
                _config(
                    {"source": "random_hermitian", "size": 8, "sparsity": 2},
                    qlsa={
                        "clock_qubits": 3,
                        "backend": "trotter",
                        "trotter_steps": steps,
                    },
                )
            )
            assert record.term_count is not None and record.term_count > 0
            assert record.exponential_bound is not None
            assert record.trotter_error is not None
            errors.append(record.trotter_error)
        assert errors[1] < errors[0] / 8.0

    def test_preconditioned(self) -> None:
        """The solver runs on the preconditioned system."""
        record = cmd_qlsa(
            _config(
                {"source": "tridiagonal", "size": 8, "diagonal": 4.0},
                spai={"level": 1},
                qlsa={"clock_qubits": 5},
            )
        )
        assert record.level == 1
        assert record.kappa_preconditioned is not None
        assert record.kappa is not None
        assert record.kappa_preconditioned < record.kappa
        assert record.fidelity is not None and record.fidelity > 0.5


class TestRcs:
    """Tests for `cmd_rcs`."""

    def test_slab(self) -> None:
        """The wall cross section is read classically and from the solver."""
        record = cmd_rcs(
            _config({"source": "fem_slab", "size": 8}, qlsa={"clock_qubits": 5})
        )
        assert record.cross_section_kind == "rcs"
        assert record.rcs_classical == pytest.approx(1.0 / (4.0 * math.pi), rel=0.1)
        assert record.rcs_reference == pytest.approx(1.0 / (4.0 * math.pi))
        assert record.rcs_quantum is not None and record.rcs_quantum >= 0.0
        assert record.rcs_quantum_error == 0.0

    def test_not_scattering(self) -> None:
        """Plain matrices have no cross section."""
        with pytest.raises(ConfigError, match="scattering"):
            cmd_rcs(_config({"source": "identity", "size": 4}))
