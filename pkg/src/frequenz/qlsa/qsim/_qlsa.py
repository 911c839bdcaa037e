# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""The unitary linear system solver pipeline.

A run prepares `|b⟩`, estimates the eigenvalues of `H` into the clock, rotates
the inversion ancilla by `C/λ̃`, and uncomputes the clock. Nothing is measured:
the solution lives in the component with both ancillas in `|1⟩`.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .._internal import next_power_of_two
from .._internal._constants import DEFAULT_QUBIT_CAP
from ..linalg import ComplexArray, ContractViolationError, SparseMatrixOracle
from ._evolution import Evolution, ExactEvolution, TrotterEvolution
from ._oracles import VectorOracle, embed_system, prepare_entangled_state
from ._phase_estimation import HamiltonianUnitary, grid_eigenvalues, phase_estimation
from ._registers import QueryCounter, Register, RegisterLayout, StateVector

_logger = logging.getLogger(__name__)


class Backend(enum.Enum):
    """The Hamiltonian simulation backend."""

    EXACT = "exact"
    """Dense eigendecomposition."""

    TROTTER = "trotter"
    """Product formulas over the 1-sparse decomposition."""


@dataclass(frozen=True)
class QlsaParams:
    """Parameters of a solver run."""

    t0: float
    """The evolution time scale; clock value `ℓ` encodes `2π·ℓ/t0`."""

    inversion_constant: float | None = None
    """The constant `C`; defaults to the smallest grid magnitude `2π/t0`."""

    epsilon: float = 1e-2
    """The target accuracy, used for the exponential count bound."""

    backend: Backend = Backend.EXACT
    """The Hamiltonian simulation backend."""

    trotter_order: int = 2
    """The product formula order of the Trotter backend."""

    trotter_steps: int = 1
    """The product formula steps per application of `U`."""

    signed_eigenvalues: bool = True
    """Whether the clock is read in two's complement."""

    def __post_init__(self) -> None:
        """Check the parameters.

        Raises:
            ValueError: if a parameter is out of range.
        """
        if self.t0 <= 0.0:
            raise ValueError(f"t0 ({self.t0}) must be positive")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon ({self.epsilon}) must be positive")
        if self.trotter_order != 1 and (
            self.trotter_order < 2 or self.trotter_order % 2
        ):
            raise ValueError(f"trotter_order ({self.trotter_order}) must be 1 or even")
        if self.trotter_steps < 1:
            raise ValueError(f"trotter_steps ({self.trotter_steps}) must be positive")
        grid_minimum = 2.0 * math.pi / self.t0
        if self.inversion_constant is not None and not (
            0.0 < self.inversion_constant <= grid_minimum * (1.0 + 1e-12)
        ):
            raise ValueError(
                f"inversion constant ({self.inversion_constant}) must lie in "
                f"(0, {grid_minimum}]"
            )

    @property
    def constant(self) -> float:
        """The inversion constant `C` in use."""
        if self.inversion_constant is not None:
            return self.inversion_constant
        return 2.0 * math.pi / self.t0

    @classmethod
    def for_norm(cls, clock_qubits: int, norm: float, **kwargs: Any) -> QlsaParams:
        """Create parameters mapping `‖H‖` to the top of the signed clock range.

        The choice is `t0 = π·(T − 1)/‖H‖`, so the smallest eigenvalue
        magnitude resolves to about `T/(2κ)` clock steps.

        Args:
            clock_qubits: the number of clock qubits `t`.
            norm: the spectral norm `‖H‖`.
            **kwargs: the other parameters.

        Returns:
            The parameters.

        Raises:
            ValueError: if the norm is not positive.
        """
        if norm <= 0.0:
            raise ValueError(f"norm ({norm}) must be positive")
        clock_size = 1 << clock_qubits
        return cls(t0=math.pi * (clock_size - 1) / norm, **kwargs)


@dataclass(frozen=True)
class QlsaDiagnostics:
    """Health indicators of a solver run."""

    clock_leakage: float
    """Probability left outside clock value 0 after uncomputing."""

    aliasing: bool
    """Whether some eigenvalue lies outside the clock range in use."""

    spectral_range: tuple[float, float]
    """The smallest and largest eigenvalue of `H`."""

    counter: QueryCounter = field(default_factory=QueryCounter)
    """The operation counts of the run."""


@dataclass(frozen=True)
class QlsaResult:
    """The outcome of a solver run."""

    state: StateVector
    """The final state."""

    sin2_phi_b: float
    """The probability `sin²φ_b` of `a_b = 1`."""

    sin2_phi_x: float
    """The probability `sin²φ_x` of `a_x = 1` given `a_b = 1`."""

    params: QlsaParams
    """The parameters of the run."""

    diagnostics: QlsaDiagnostics
    """Health indicators of the run."""

    dim: int
    """The system dimension before padding."""


def make_evolution(
    hamiltonian: SparseMatrixOracle,
    params: QlsaParams,
    counter: QueryCounter | None = None,
) -> Evolution:
    """Create the evolution backend selected by the parameters.

    Args:
        hamiltonian: the Hermitian matrix.
        params: the run parameters.
        counter: counters to record term exponentials in, optional.

    Returns:
        The backend.
    """
    if params.backend is Backend.EXACT:
        return ExactEvolution(hamiltonian)
    return TrotterEvolution.from_hamiltonian(
        hamiltonian,
        order=params.trotter_order,
        steps=params.trotter_steps,
        counter=counter,
    )


def eigenvalue_inversion(state: StateVector, params: QlsaParams) -> StateVector:
    """Rotate the inversion ancilla by the inverse of the clock eigenvalue.

    For clock value `ℓ` encoding `λ̃ ≠ 0` the rotation sends `|0⟩` to
    `√(1 − (C/λ̃)²)|0⟩ + (C/λ̃)|1⟩`. Clock value 0 leaves the ancilla alone.

    Args:
        state: the state after phase estimation.
        params: the run parameters.

    Returns:
        The rotated state.

    Raises:
        ContractViolationError: if `C > |λ̃|` for some clock value.
    """
    layout = state.layout
    eigenvalues = grid_eigenvalues(
        layout.clock_size, params.t0, params.signed_eigenvalues
    )
    ratios = np.zeros(layout.clock_size)
    nonzero = eigenvalues != 0.0
    ratios[nonzero] = params.constant / eigenvalues[nonzero]
    if np.any(np.abs(ratios) > 1.0 + 1e-12):
        raise ContractViolationError(
            f"inversion constant {params.constant} exceeds a grid eigenvalue"
        )
    ratios = np.clip(ratios, -1.0, 1.0)
    cosines = np.sqrt(1.0 - ratios**2)

    tensor = np.moveaxis(
        state.amplitudes,
        (layout.axis(Register.CLOCK), layout.axis(Register.INVERSION)),
        (0, 1),
    )
    extra = (1,) * (tensor.ndim - 1)
    cos = cosines.reshape((-1,) + extra[:-1])
    sin = ratios.reshape((-1,) + extra[:-1])
    zero, one = tensor[:, 0].copy(), tensor[:, 1].copy()
    tensor[:, 0] = cos * zero - sin * one
    tensor[:, 1] = sin * zero + cos * one
    result = state.with_amplitudes(
        np.moveaxis(
            tensor,
            (0, 1),
            (layout.axis(Register.CLOCK), layout.axis(Register.INVERSION)),
        )
    )
    result.check_norm("eigenvalue inversion")
    return result


def _aliasing(
    spectrum: tuple[float, float], params: QlsaParams, clock_size: int
) -> bool:
    low, high = (value * params.t0 / (2.0 * math.pi) for value in spectrum)
    if params.signed_eigenvalues:
        return max(abs(low), abs(high)) >= clock_size / 2
    return low < 0.0 or high >= clock_size


def run_qlsa(
    hamiltonian: SparseMatrixOracle,
    b_oracle: VectorOracle,
    params: QlsaParams,
    clock_qubits: int,
    *,
    counter: QueryCounter | None = None,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> QlsaResult:
    """Run the unitary solver pipeline.

    The system is zero-padded to the next power of two. After the run the
    component with `a_b = 1` and `a_x = 1` equals `sinφ_b·sinφ_x·|x⟩`.

    Args:
        hamiltonian: the Hermitian system matrix.
        b_oracle: the oracle of the right-hand side.
        params: the run parameters.
        clock_qubits: the number of clock qubits `t`.
        counter: counters to update, optional; a fresh one is used otherwise.
        qubit_cap: the largest number of qubits allowed.

    Returns:
        The final state with its amplitudes and diagnostics.

    Raises:
        ContractViolationError: if the matrix is not Hermitian or the
            dimensions differ.
    """
    if not hamiltonian.hermitian:
        raise ContractViolationError("the pipeline needs a Hermitian matrix")
    if b_oracle.dim != hamiltonian.dim:
        raise ContractViolationError(
            f"right-hand side of dimension {b_oracle.dim} does not fit a matrix "
            f"of dimension {hamiltonian.dim}"
        )
    counter = QueryCounter() if counter is None else counter
    system_qubits = next_power_of_two(hamiltonian.dim)
    layout = RegisterLayout(clock_qubits, system_qubits, qubit_cap=qubit_cap)
    padded = embed_system(hamiltonian, layout.system_size)

    eigenvalues = scipy.linalg.eigvalsh(hamiltonian.to_dense())
    spectrum = (float(eigenvalues[0]), float(eigenvalues[-1]))
    aliasing = _aliasing(spectrum, params, layout.clock_size)
    if aliasing:
        _logger.warning(
            "spectrum [%g, %g] does not fit the clock range for t0=%g and T=%d",
            spectrum[0],
            spectrum[1],
            params.t0,
            layout.clock_size,
        )

    unitary = HamiltonianUnitary(
        make_evolution(padded, params, counter), params.t0, layout.clock_size
    )
    b_padded = b_oracle.padded(layout.system_size)
    state = prepare_entangled_state(b_padded, layout, counter)
    state = phase_estimation(unitary, state)
    state = eigenvalue_inversion(state, params)
    state = phase_estimation(unitary, state, inverse=True)

    sin2_phi_b = state.probability({Register.PREPARATION: 1})
    both = state.probability({Register.PREPARATION: 1, Register.INVERSION: 1})
    sin2_phi_x = both / sin2_phi_b if sin2_phi_b > 0.0 else 0.0
    leakage = 1.0 - state.probability({Register.CLOCK: 0})
    _logger.debug(
        "run done: sin2_phi_b=%.6g sin2_phi_x=%.6g leakage=%.3g exponentials=%d",
        sin2_phi_b,
        sin2_phi_x,
        leakage,
        counter.exponentials,
    )
    return QlsaResult(
        state=state,
        sin2_phi_b=sin2_phi_b,
        sin2_phi_x=sin2_phi_x,
        params=params,
        diagnostics=QlsaDiagnostics(
            clock_leakage=max(0.0, leakage),
            aliasing=aliasing,
            spectral_range=spectrum,
            counter=counter,
        ),
        dim=hamiltonian.dim,
    )


def solution_component(result: QlsaResult) -> ComplexArray:
    """Get the unnormalized component with `a_b = 1` and `a_x = 1`.

    Args:
        result: the outcome of a run.

    Returns:
        The component over the clock and system registers, clock first.
    """
    return result.state.component({Register.PREPARATION: 1, Register.INVERSION: 1})


def solution_vector(result: QlsaResult) -> ComplexArray:
    """Get the normalized solution read off clock value 0.

    Args:
        result: the outcome of a run.

    Returns:
        The normalized solution, of the unpadded dimension.

    Raises:
        ContractViolationError: if the solution component vanishes.
    """
    vector = solution_component(result)[0, : result.dim]
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise ContractViolationError("the solution component vanishes")
    return vector / norm


def solution_fidelity(result: QlsaResult, reference: npt.ArrayLike) -> float:
    """Measure the fidelity of the simulated solution against a reference.

    The fidelity is the squared overlap of the whole `a_b = a_x = 1`
    component, normalized, with `|0⟩_clock|x_ref⟩`; clock leakage lowers it.

    Args:
        result: the outcome of a run.
        reference: the reference solution, of the unpadded dimension.

    Returns:
        The fidelity in `[0, 1]`.

    Raises:
        ContractViolationError: if the reference has the wrong size or either
            vector vanishes.
    """
    expected = np.asarray(reference, dtype=np.complex128).reshape(-1)
    if len(expected) != result.dim:
        raise ContractViolationError(
            f"reference of dimension {len(expected)}, expected {result.dim}"
        )
    component = solution_component(result)
    norms = float(np.linalg.norm(component)) * float(np.linalg.norm(expected))
    if norms == 0.0:
        raise ContractViolationError("cannot measure the fidelity of a zero vector")
    overlap = np.vdot(expected, component[0, : result.dim])
    return float(abs(overlap) ** 2 / norms**2)
