# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""The single-point experiment commands.

Each command builds the linear system a configuration describes, runs one
experiment on it and returns a [`ResultRecord`][frequenz.qlsa.harness.ResultRecord].
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import contextlib
import logging
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from ..fem import (
    AssembledSystem,
    FemError,
    MeshError,
    ScatteringProblem,
    Slab,
    assemble_system,
    circle_mesh,
    cross_section_prefactor,
    quantum_rcs,
    quantum_rcs_error,
    read_mesh,
    reference_solution,
    slab_mesh,
)
from ..linalg import (
    CgResult,
    ComplexArray,
    LinalgError,
    SparseMatrixOracle,
    cg_solve,
    condition_number,
    dense_solve,
    diagonal_matrix,
    hermitian_with_spectrum,
    random_hermitian,
    read_matrix_market,
    read_vector,
    sparse_solve,
    tridiagonal_toeplitz,
)
from ..qsim import (
    Backend,
    ExactEvolution,
    PipelineAmplitudes,
    QlsaParams,
    QueryCounter,
    estimate_amplitudes,
    grid_eigenvalues,
    make_evolution,
    prepare_dilated_oracles,
    run_qlsa,
    signed_clock_values,
    solution_fidelity,
    suzuki_exponential_bound,
    swap_test,
)
from ..spai import (
    PreconditionedOracle,
    Preconditioner,
    Side,
    assemble_preconditioner,
    bound_check,
    build_pattern,
    preconditioned_rhs,
)
from ._config import Command, MatrixSource, RunConfig, SpaiConfig
from ._exceptions import ConfigError, NumericalFailure
from ._records import ResultRecord

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """A linear system with the readout vector of its solution."""

    matrix: SparseMatrixOracle
    """The system matrix `A`."""

    rhs: ComplexArray
    """The right-hand side `b`."""

    reference: ComplexArray
    """The readout vector `R'`; the quantity read out is `⟨R'|x⟩`."""

    scattering: AssembledSystem | None = None
    """The scattering system the matrix was assembled from, if any."""

    @property
    def dim(self) -> int:
        """The number of unknowns."""
        return self.matrix.dim


def _random_vector(dim: int, rng: np.random.Generator) -> ComplexArray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def _grid_spectrum(
    config: RunConfig, rng: np.random.Generator
) -> npt.NDArray[np.float64]:
    qlsa = config.qlsa
    assert isinstance(qlsa.t0, float)
    clock_size = 1 << qlsa.clock_qubits
    levels = signed_clock_values(clock_size)
    grid = grid_eigenvalues(clock_size, qlsa.t0)
    # Zero is not invertible and -T/2 aliases with T/2.
    usable = grid[(levels != 0) & (levels != -(clock_size // 2))]
    if len(usable) == 0:
        raise ConfigError(f"a {qlsa.clock_qubits} qubit clock has no nonzero values")
    return rng.choice(usable, size=config.matrix.size)


def _read_vector(path: Path, dim: int, what: str) -> ComplexArray:
    try:
        vector = read_vector(path)
    except (OSError, ValueError) as err:
        raise ConfigError(f"can't read the {what} from {path}: {err}") from err
    if len(vector) != dim:
        raise ConfigError(
            f"the {what} in {path} has {len(vector)} entries, expected {dim}"
        )
    return vector


def _scattering_system(config: RunConfig) -> AssembledSystem:
    matrix = config.matrix
    try:
        if matrix.source is MatrixSource.FEM_SLAB:
            mesh = (
                slab_mesh(matrix.length, matrix.size)
                if matrix.mesh is None
                else read_mesh(matrix.mesh)
            )
            problem = ScatteringProblem.slab(matrix.wavenumber, matrix.length)
        else:
            mesh = (
                circle_mesh(
                    matrix.radius, matrix.outer_radius, matrix.radial, matrix.angular
                )
                if matrix.mesh is None
                else read_mesh(matrix.mesh)
            )
            problem = ScatteringProblem.circle(
                matrix.wavenumber,
                matrix.radius,
                incidence=matrix.incidence,
                observation=matrix.observation,
                boundary=matrix.boundary,
            )
        return assemble_system(mesh, problem)
    except (MeshError, ValueError) as err:
        raise ConfigError(f"can't build the scattering problem: {err}") from err


def _matrix(config: RunConfig, rng: np.random.Generator) -> SparseMatrixOracle:
    matrix = config.matrix
    match matrix.source:
        case MatrixSource.IDENTITY:
            return SparseMatrixOracle.identity(matrix.size)
        case MatrixSource.TRIDIAGONAL:
            return tridiagonal_toeplitz(
                matrix.size, matrix.diagonal, matrix.off_diagonal
            )
        case MatrixSource.RANDOM_HERMITIAN if config.qlsa.on_grid:
            return hermitian_with_spectrum(_grid_spectrum(config, rng), rng)
        case MatrixSource.RANDOM_HERMITIAN:
            return random_hermitian(matrix.size, matrix.sparsity, rng)
        case MatrixSource.DIAGONAL:
            values = (
                np.arange(1, matrix.size + 1, dtype=np.float64)
                if matrix.eigenvalues is None
                else np.asarray(matrix.eigenvalues)
            )
            return diagonal_matrix(values)
        case MatrixSource.FILE if matrix.path is not None:
            try:
                return read_matrix_market(matrix.path)
            except (OSError, ValueError) as err:
                raise ConfigError(
                    f"can't read the matrix from {matrix.path}: {err}"
                ) from err
    raise ConfigError(f"{matrix.source.value} is not a plain matrix source")


def build_system(config: RunConfig) -> LinearSystem:
    """Build the linear system of a configuration.

    Random matrices and vectors are drawn from a generator seeded with the
    configured seed, so the same configuration always gives the same system.
    Missing right-hand sides and readout vectors are random; scattering
    problems read out the far field.

    Args:
        config: the run configuration.

    Returns:
        The system.

    Raises:
        ConfigError: if an input file is unreadable or has the wrong size.
    """
    rng = np.random.default_rng(config.seed)
    source = config.matrix
    if source.source.is_fem:
        scattering = _scattering_system(config)
        _logger.info(
            "assembled %s with %d unknowns", source.source.value, scattering.dim
        )
        return LinearSystem(
            matrix=scattering.matrix,
            rhs=scattering.rhs,
            reference=np.conj(scattering.far_field),
            scattering=scattering,
        )
    matrix = _matrix(config, rng)
    rhs = (
        _random_vector(matrix.dim, rng)
        if source.rhs is None
        else _read_vector(source.rhs, matrix.dim, "right-hand side")
    )
    reference = (
        _random_vector(matrix.dim, rng)
        if source.reference is None
        else _read_vector(source.reference, matrix.dim, "readout vector")
    )
    _logger.info("built %s matrix %s", source.source.value, matrix)
    return LinearSystem(matrix=matrix, rhs=rhs, reference=reference)


def make_preconditioner(
    matrix: SparseMatrixOracle, spai: SpaiConfig
) -> Preconditioner:
    """Build the sparse approximate inverse a configuration asks for.

    Args:
        matrix: the system matrix.
        spai: the `[spai]` section.

    Returns:
        The preconditioner.
    """
    pattern = build_pattern(matrix, spai.level, spai.side)
    return assemble_preconditioner(matrix, pattern, max_workers=spai.max_workers)


def precondition(system: LinearSystem, precond: Preconditioner) -> LinearSystem:
    """Get the preconditioned system with the same readout value.

    A left preconditioner gives `MA·x = Mb`. A right one gives `AM·y = b`
    with `x = My`, so the readout vector becomes `M^†R'`.

    Args:
        system: the system.
        precond: the preconditioner.

    Returns:
        The preconditioned system.
    """
    matrix = PreconditionedOracle(system.matrix, precond).to_oracle()
    if precond.side is Side.LEFT:
        return replace(
            system, matrix=matrix, rhs=preconditioned_rhs(precond, system.rhs)
        )
    reference = precond.to_csr().conj().T @ system.reference
    return replace(system, matrix=matrix, reference=np.asarray(reference))


def qlsa_params(config: RunConfig, hamiltonian: SparseMatrixOracle) -> QlsaParams:
    """Resolve the `t0` and `C` policies of a configuration.

    Args:
        config: the run configuration.
        hamiltonian: the Hermitian matrix the solver runs on.

    Returns:
        The solver parameters.

    Raises:
        ConfigError: if the configured constant does not fit the time scale.
    """
    qlsa = config.qlsa
    constant = None if qlsa.inversion_constant == "grid" else qlsa.inversion_constant
    kwargs: dict[str, Any] = {
        "inversion_constant": constant,
        "epsilon": qlsa.epsilon,
        "backend": qlsa.backend,
        "trotter_order": qlsa.trotter_order,
        "trotter_steps": qlsa.trotter_steps,
    }
    try:
        if qlsa.t0 == "kappa":
            norm = condition_number(hamiltonian).sigma_max
            return QlsaParams.for_norm(qlsa.clock_qubits, norm, **kwargs)
        return QlsaParams(t0=float(qlsa.t0), **kwargs)
    except ValueError as err:
        raise ConfigError(f"invalid solver parameters: {err}") from err


@contextlib.contextmanager
def _numerical(what: str) -> Iterator[None]:
    try:
        yield
    except (LinalgError, FemError) as err:
        _logger.error("%s failed: %s", what, err)
        raise NumericalFailure(f"{what} failed: {err}") from err


def _base_record(
    config: RunConfig, command: Command, system: LinearSystem
) -> dict[str, Any]:
    return {
        "experiment": config.experiment,
        "command": command.value,
        "seed": config.seed,
        "dimension": system.dim,
        "sparsity": system.matrix.sparsity,
    }


def _relative_error(value: ComplexArray, expected: ComplexArray) -> float:
    norm = float(np.linalg.norm(expected))
    return float(np.linalg.norm(value - expected)) / norm if norm > 0.0 else 0.0


def _cg(config: RunConfig, system: LinearSystem, **kwargs: Any) -> CgResult:
    return cg_solve(
        system.matrix,
        system.rhs,
        tol=config.cg.tol,
        max_iter=config.cg.max_iter,
        **kwargs,
    )


def _scattering_fields(
    system: AssembledSystem, solution: ComplexArray
) -> dict[str, Any]:
    try:
        reference: float | None = reference_solution(system.problem)
    except FemError:
        reference = None
    if reference is not None and isinstance(system.problem.geometry, Slab):
        # The wall reference is the reflection magnitude.
        reference = cross_section_prefactor(system.kind) * reference**2
    return {
        "cross_section_kind": system.kind.value,
        "rcs_classical": system.cross_section(solution),
        "rcs_reference": reference,
    }


def cmd_solve(config: RunConfig) -> ResultRecord:
    """Solve the system classically, with and without preconditioning.

    Args:
        config: the run configuration.

    Returns:
        The iterations, residuals, condition numbers and, for scattering
            problems, the classical cross section.

    Raises:
        NumericalFailure: if the system is singular.
    """
    start = time.perf_counter()
    system = build_system(config)
    with _numerical("solve"):
        plain = _cg(config, system)
        expected = dense_solve(system.matrix, system.rhs)
        fields = _base_record(config, Command.SOLVE, system)
        fields.update(
            converged=plain.converged,
            iterations=plain.iterations,
            residual_norm=plain.residual_norm,
            solution_error=_relative_error(plain.x, expected),
            kappa=condition_number(system.matrix).kappa,
        )
        if config.spai is not None:
            precond = make_preconditioner(system.matrix, config.spai)
            preconditioned = _cg(config, system, preconditioner=precond)
            fields.update(
                converged=plain.converged and preconditioned.converged,
                iterations_preconditioned=preconditioned.iterations,
                kappa_preconditioned=condition_number(
                    precondition(system, precond).matrix
                ).kappa,
                level=precond.level,
                eps_pre=precond.eps_pre,
            )
        if system.scattering is not None:
            fields.update(_scattering_fields(system.scattering, plain.x))
    return ResultRecord(**fields, wall_time=time.perf_counter() - start)


def cmd_spai(config: RunConfig) -> ResultRecord:
    """Build the sparse approximate inverse and check its spectral bound.

    Without a `[spai]` section a level 1 left inverse is built.

    Args:
        config: the run configuration.

    Returns:
        The largest local residual, the bound and the measured condition
            numbers.

    Raises:
        NumericalFailure: if the condition number cannot be measured.
    """
    start = time.perf_counter()
    system = build_system(config)
    spai = SpaiConfig() if config.spai is None else config.spai
    with _numerical("spai"):
        precond = make_preconditioner(system.matrix, spai)
        bound = bound_check(precond, system.matrix.sparsity)
        fields = _base_record(config, Command.SPAI, system)
        fields.update(
            kappa=condition_number(system.matrix).kappa,
            kappa_preconditioned=condition_number(
                precondition(system, precond).matrix
            ).kappa,
            level=precond.level,
            eps_pre=precond.eps_pre,
            bound_applicable=bound.applicable,
            spectral_bound=bound.bound,
        )
    if bound.applicable and bound.bound is not None:
        if fields["kappa_preconditioned"] > bound.bound * (1.0 + 1e-9):
            _logger.warning(
                "measured condition number %g exceeds the bound %g",
                fields["kappa_preconditioned"],
                bound.bound,
            )
    return ResultRecord(**fields, wall_time=time.perf_counter() - start)


def _trotter_error(
    hamiltonian: SparseMatrixOracle, params: QlsaParams, clock_size: int
) -> float:
    step = params.t0 / clock_size
    identity = np.eye(hamiltonian.dim, dtype=np.complex128)
    approximate = make_evolution(hamiltonian, params).apply(identity, step)
    exact = ExactEvolution(hamiltonian).apply(identity, step)
    return float(np.linalg.norm(approximate - exact, 2))


def _amplitude_fields(amplitudes: PipelineAmplitudes) -> dict[str, Any]:
    fields: dict[str, Any] = {
        "sin2_phi_b": amplitudes.sin2_phi_b,
        "sin2_phi_x": amplitudes.sin2_phi_x,
        "sin2_phi_r": amplitudes.sin2_phi_r,
        "p_1110": amplitudes.p_1110,
        "p_1111": amplitudes.p_1111,
        "sin2_phi_b_error": amplitudes.sin2_phi_b_error,
        "sin2_phi_x_error": amplitudes.sin2_phi_x_error,
        "sin2_phi_r_error": amplitudes.sin2_phi_r_error,
        "p_1110_error": amplitudes.p_1110_error,
        "p_1111_error": amplitudes.p_1111_error,
    }
    if amplitudes.sin2_phi_b * amplitudes.sin2_phi_x * amplitudes.sin2_phi_r > 0.0:
        fields["overlap"] = amplitudes.overlap()
    return fields


def _counter_fields(
    counter: QueryCounter, params: QlsaParams, kappa: float, norm: float
) -> dict[str, Any]:
    fields: dict[str, Any] = {
        "oracle_queries": counter.oracle_queries,
        "exponentials": counter.exponentials,
        "grover_iterations": counter.grover_iterations,
        "term_count": counter.term_count,
    }
    if counter.term_count > 0:
        fields["exponential_bound"] = suzuki_exponential_bound(
            counter.term_count, kappa * norm / params.epsilon, params.epsilon
        )
    return fields


def _solver_system(config: RunConfig) -> tuple[LinearSystem, LinearSystem]:
    system = build_system(config)
    if config.spai is None:
        return system, system
    precond = make_preconditioner(system.matrix, config.spai)
    return system, precondition(system, precond)


def _run_pipeline(
    config: RunConfig, solved: LinearSystem, counter: QueryCounter
) -> tuple[PipelineAmplitudes, dict[str, Any]]:
    problem = prepare_dilated_oracles(solved.matrix, solved.rhs, solved.reference)
    assert problem.reference is not None
    params = qlsa_params(config, problem.hamiltonian)
    report = condition_number(problem.hamiltonian)
    result = run_qlsa(
        problem.hamiltonian,
        problem.rhs,
        params,
        config.qlsa.clock_qubits,
        counter=counter,
        qubit_cap=config.qlsa.qubit_cap,
    )
    amplitudes = swap_test(result, problem.reference, counter)
    if config.qlsa.bits is not None:
        amplitudes = estimate_amplitudes(
            amplitudes, config.qlsa.bits, config.seed, counter
        )
    expected = dense_solve(problem.hamiltonian, problem.rhs.vector)
    reference = problem.reference.vector
    overlap_dense = abs(np.vdot(reference, expected)) ** 2 / (
        float(np.linalg.norm(reference)) ** 2 * float(np.linalg.norm(expected)) ** 2
    )
    fields: dict[str, Any] = {
        "kappa": report.kappa,
        "fidelity": solution_fidelity(result, expected),
        "clock_leakage": result.diagnostics.clock_leakage,
        "overlap_dense": overlap_dense,
        "rhs_scale": problem.rhs.scale,
        "reference_scale": problem.reference.scale,
    }
    if params.backend is Backend.TROTTER:
        fields["trotter_error"] = _trotter_error(
            problem.hamiltonian, params, 1 << config.qlsa.clock_qubits
        )
    fields.update(_amplitude_fields(amplitudes))
    fields.update(_counter_fields(counter, params, report.kappa, report.sigma_max))
    return amplitudes, fields


def cmd_qlsa(config: RunConfig) -> ResultRecord:
    """Run the quantum solver and read out the overlap with the readout vector.

    Non-Hermitian systems are dilated; with a `[spai]` section the solver
    runs on the preconditioned system.

    Args:
        config: the run configuration.

    Returns:
        The fidelity against a dense solve, the readout probabilities and the
            cost counters.

    Raises:
        NumericalFailure: if the system is singular or the pipeline degenerate.
    """
    start = time.perf_counter()
    counter = QueryCounter()
    with _numerical("qlsa"):
        system, solved = _solver_system(config)
        _, pipeline = _run_pipeline(config, solved, counter)
        fields = _base_record(config, Command.QLSA, system)
        fields.update(pipeline)
        if solved is not system:
            fields.update(
                level=config.spai.level if config.spai is not None else None,
                kappa_preconditioned=pipeline["kappa"],
                kappa=condition_number(system.matrix).kappa,
            )
    del fields["rhs_scale"], fields["reference_scale"]
    return ResultRecord(**fields, wall_time=time.perf_counter() - start)


def cmd_rcs(config: RunConfig) -> ResultRecord:
    """Compute the cross section classically, from the solver and in closed form.

    Args:
        config: a run configuration with a scattering matrix source.

    Returns:
        The three cross sections with the solver readout.

    Raises:
        ConfigError: if the matrix source is not a scattering problem.
        NumericalFailure: if the system is singular or the pipeline degenerate.
    """
    if not config.matrix.source.is_fem:
        raise ConfigError(
            f"rcs needs a scattering problem, not {config.matrix.source.value}"
        )
    start = time.perf_counter()
    counter = QueryCounter()
    with _numerical("rcs"):
        system, solved = _solver_system(config)
        scattering = system.scattering
        assert scattering is not None
        solution = sparse_solve(system.matrix, system.rhs)
        amplitudes, pipeline = _run_pipeline(config, solved, counter)
        rhs_scale = pipeline.pop("rhs_scale")
        reference_scale = pipeline.pop("reference_scale")
        units: dict[str, Any] = {
            "kind": scattering.kind,
            "wavenumber": scattering.problem.wavenumber,
        }
        quantum = quantum_rcs(amplitudes, None, rhs_scale, reference_scale, **units)
        error = quantum_rcs_error(
            amplitudes, None, rhs_scale, reference_scale, **units
        )
        fields = _base_record(config, Command.RCS, system)
        fields.update(pipeline)
        fields.update(_scattering_fields(scattering, solution))
    fields.update(rcs_quantum=quantum, rcs_quantum_error=error)
    _logger.info(
        "cross section: classical %g, quantum %g ± %g, reference %s",
        fields["rcs_classical"],
        quantum,
        error,
        fields["rcs_reference"],
    )
    return ResultRecord(**fields, wall_time=time.perf_counter() - start)


COMMANDS: dict[Command, Callable[[RunConfig], ResultRecord]] = {
    Command.SOLVE: cmd_solve,
    Command.SPAI: cmd_spai,
    Command.QLSA: cmd_qlsa,
    Command.RCS: cmd_rcs,
}
"""The single-point commands by name."""
