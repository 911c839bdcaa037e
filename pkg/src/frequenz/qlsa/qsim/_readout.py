# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Reading numbers out of the solver state.

Every readout is a probability of a projector diagonal in the computational
basis. The simulator knows these probabilities exactly; amplitude estimation
turns them into the estimates a quantum computer would return, sampling the
exact measurement distribution with a seeded generator.

The swap test reports the probabilities `P_1110` and `P_1111` with the ancilla
bits in the order `(a_b, a_x, a_r, a_s)`.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .._internal._constants import DEFAULT_QUBIT_CAP
from ..linalg import ComplexArray, ContractViolationError, SparseMatrixOracle
from ._oracles import VectorOracle, load_vector
from ._phase_estimation import phase_estimation
from ._qlsa import QlsaParams, QlsaResult, run_qlsa
from ._registers import QueryCounter, Register, RegisterLayout, StateVector

_logger = logging.getLogger(__name__)

Seed = int | np.random.SeedSequence | np.random.Generator
"""Anything a random generator can be created from."""

_SOLUTION = {Register.PREPARATION: 1, Register.INVERSION: 1}

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class AmplitudeEstimate:
    """The outcome of amplitude estimation."""

    estimate: float
    """The estimated probability `â`."""

    bound: float
    """The error bound, evaluated at the estimate."""

    outcome: int | None = None
    """The sampled clock value `y`, `None` for exact readout."""

    distribution: npt.NDArray[np.float64] | None = None
    """The exact distribution of the clock, `None` for exact readout."""


@dataclass(frozen=True)
class PipelineAmplitudes:
    """The five probabilities the cross-section readout is built from."""

    sin2_phi_b: float
    """The probability of `a_b = 1`."""

    sin2_phi_x: float
    """The probability of `a_x = 1` given `a_b = 1`."""

    sin2_phi_r: float
    """The probability of `a_r = 1`."""

    p_1110: float
    """The probability of `a_b = a_x = a_r = 1` and `a_s = 0`."""

    p_1111: float
    """The probability of `a_b = a_x = a_r = a_s = 1`."""

    dimension: int
    """The system register dimension the vectors were prepared over."""

    inversion_constant: float
    """The constant `C` of the eigenvalue inversion."""

    sin2_phi_b_error: float | None = None
    """The error bound on `sin2_phi_b`, if estimated."""

    sin2_phi_x_error: float | None = None
    """The error bound on `sin2_phi_x`, if estimated."""

    sin2_phi_r_error: float | None = None
    """The error bound on `sin2_phi_r`, if estimated."""

    p_1110_error: float | None = None
    """The error bound on `p_1110`, if estimated."""

    p_1111_error: float | None = None
    """The error bound on `p_1111`, if estimated."""

    @property
    def estimated(self) -> bool:
        """Whether the values come from amplitude estimation."""
        return self.p_1110_error is not None

    def overlap(self) -> float:
        """Get `|⟨R|x⟩|²` for the normalized vectors.

        Returns:
            `(P_1110 − P_1111)/(sin²φ_b·sin²φ_x·sin²φ_r)`.

        Raises:
            ContractViolationError: if a preparation probability vanishes.
        """
        denominator = self.sin2_phi_b * self.sin2_phi_x * self.sin2_phi_r
        if denominator <= 0.0:
            raise ContractViolationError("a branch of the overlap has probability 0")
        return (self.p_1110 - self.p_1111) / denominator


def estimation_bound(probability: float, bits: int) -> float:
    """Get the amplitude estimation error bound.

    With `M = 2^bits` the bound is `2π√(a(1 − a))/M + π²/M²`; it holds with
    probability at least `8/π²`.

    Args:
        probability: the probability `a`.
        bits: the number of clock bits.

    Returns:
        The bound.
    """
    size = float(1 << bits)
    spread = math.sqrt(max(0.0, probability * (1.0 - probability)))
    return 2.0 * math.pi * spread / size + math.pi**2 / size**2


class _GroverIterate:
    """The Grover iterate restricted to its invariant plane.

    With `a = sin²θ` it is a rotation by `2θ`, of eigenvalues `e^{±2iθ}`.
    """

    def __init__(self, theta: float, counter: QueryCounter | None) -> None:
        self._theta = theta
        self._counter = counter

    @property
    def dim(self) -> int:
        return 2

    def apply_power(self, vectors: ComplexArray, power: int) -> ComplexArray:
        if self._counter is not None:
            self._counter.grover_iterations += abs(power)
        angle = 2.0 * self._theta * power
        rotation = np.array(
            [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
        )
        return np.tensordot(rotation, vectors, axes=1)


def _check_bits(bits: int) -> None:
    if bits < 1:
        raise ValueError(f"bits ({bits}) must be positive")


def grover_amplitude_estimate(
    probability: float,
    bits: int,
    seed: Seed = 0,
    counter: QueryCounter | None = None,
) -> AmplitudeEstimate:
    """Simulate amplitude estimation of a known probability.

    Phase estimation with `bits` clock qubits runs on the Grover iterate,
    starting from the prepared state. The exact clock distribution is
    sampled once and the outcome `y` gives `â = sin²(πy/2^bits)`.

    Args:
        probability: the probability `a` of the good subspace.
        bits: the number of clock bits.
        seed: the seed of the sampling.
        counter: counters to record Grover iterations in, optional.

    Returns:
        The estimate.

    Raises:
        ValueError: if `bits < 1` or the probability is outside `[0, 1]`.
    """
    _check_bits(bits)
    if not -1e-12 <= probability <= 1.0 + 1e-12:
        raise ValueError(f"probability ({probability}) must lie in [0, 1]")
    theta = math.asin(math.sqrt(min(1.0, max(0.0, probability))))
    layout = RegisterLayout(clock_qubits=bits, system_qubits=1)
    amplitudes = np.zeros(layout.shape, dtype=np.complex128)
    # Bad and good components of the prepared state.
    amplitudes[0, :, 0, 0] = [math.cos(theta), math.sin(theta)]
    state = phase_estimation(
        _GroverIterate(theta, counter), StateVector(layout, amplitudes)
    )
    distribution = state.marginal(Register.CLOCK)
    distribution = distribution / distribution.sum()
    rng = np.random.default_rng(seed)
    outcome = int(rng.choice(layout.clock_size, p=distribution))
    estimate = math.sin(math.pi * outcome / layout.clock_size) ** 2
    return AmplitudeEstimate(
        estimate=estimate,
        bound=estimation_bound(estimate, bits),
        outcome=outcome,
        distribution=distribution,
    )


def amplitude_estimate(
    state: StateVector,
    good: Mapping[Register, int],
    bits: int | None = None,
    seed: Seed = 0,
    counter: QueryCounter | None = None,
) -> AmplitudeEstimate:
    """Estimate the probability of a subspace of a state.

    Args:
        state: the state the pipeline prepares.
        good: the register values selecting the good subspace.
        bits: the number of clock bits; `None` reads the exact probability.
        seed: the seed of the sampling.
        counter: counters to record Grover iterations in, optional.

    Returns:
        The estimate.
    """
    probability = state.probability(good)
    if bits is None:
        return AmplitudeEstimate(estimate=probability, bound=0.0)
    return grover_amplitude_estimate(probability, bits, seed, counter)


def _apply_single(tensor: ComplexArray, axis: int, gate: ComplexArray) -> ComplexArray:
    moved = np.moveaxis(tensor, axis, 0)
    return np.moveaxis(np.tensordot(gate, moved, axes=1), 0, axis)


def swap_test(
    result: QlsaResult,
    r_oracle: VectorOracle,
    counter: QueryCounter | None = None,
) -> PipelineAmplitudes:
    """Compare the solution with a readout vector through a swap test.

    `R` is prepared into its own register and flag ancilla, then a Hadamard
    on `a_s`, a swap of the solution and `R` registers controlled by `a_s`
    and another Hadamard are applied. `(P_1110 − P_1111)` then equals
    `sin²φ_b·sin²φ_x·sin²φ_r·|⟨R|x⟩|²` exactly.

    Args:
        result: the outcome of a solver run.
        r_oracle: the oracle of the readout vector.
        counter: counters to update, optional.

    Returns:
        The exact probabilities.

    Raises:
        ContractViolationError: if `R` does not fit the solution register.
    """
    layout = result.state.layout.with_readout()
    if r_oracle.dim not in (result.dim, layout.system_size):
        raise ContractViolationError(
            f"readout vector of dimension {r_oracle.dim} does not fit a system "
            f"of dimension {result.dim}"
        )
    state = result.state.extend(layout, {})
    state = load_vector(
        state,
        r_oracle.padded(layout.system_size),
        Register.REFERENCE,
        Register.REFERENCE_FLAG,
        counter,
    )

    swap_axis = layout.axis(Register.SWAP)
    tensor = _apply_single(state.amplitudes, swap_axis, _HADAMARD)
    index: list[object] = [slice(None)] * tensor.ndim
    index[swap_axis] = 1
    controlled = tuple(index)
    # The swap ancilla comes after both registers, so their axes are unchanged
    # in the slice.
    tensor[controlled] = np.swapaxes(
        tensor[controlled],
        layout.axis(Register.SYSTEM),
        layout.axis(Register.REFERENCE),
    ).copy()
    tensor = _apply_single(tensor, swap_axis, _HADAMARD)
    state = state.with_amplitudes(tensor)
    state.check_norm("swap test")

    selected = {**_SOLUTION, Register.REFERENCE_FLAG: 1}
    amplitudes = PipelineAmplitudes(
        sin2_phi_b=result.sin2_phi_b,
        sin2_phi_x=result.sin2_phi_x,
        sin2_phi_r=state.probability({Register.REFERENCE_FLAG: 1}),
        p_1110=state.probability({**selected, Register.SWAP: 0}),
        p_1111=state.probability({**selected, Register.SWAP: 1}),
        dimension=layout.system_size,
        inversion_constant=result.params.constant,
    )
    _logger.debug("swap test: %s", amplitudes)
    return amplitudes


def estimate_amplitudes(
    exact: PipelineAmplitudes,
    bits: int,
    seed: int = 0,
    counter: QueryCounter | None = None,
) -> PipelineAmplitudes:
    """Replace exact pipeline probabilities with amplitude estimates.

    Each of `sin²φ_b`, `sin²φ_b·sin²φ_x`, `sin²φ_r`, `P_1110` and `P_1111` is
    estimated independently, with its own child seed.

    Args:
        exact: the exact probabilities.
        bits: the number of clock bits of every estimation.
        seed: the root seed.
        counter: counters to record Grover iterations in, optional.

    Returns:
        The estimated probabilities with their error bounds.
    """
    _check_bits(bits)
    seeds = np.random.SeedSequence(seed).spawn(5)
    targets = (
        exact.sin2_phi_b,
        exact.sin2_phi_b * exact.sin2_phi_x,
        exact.sin2_phi_r,
        exact.p_1110,
        exact.p_1111,
    )
    b, bx, r, p0, p1 = (
        grover_amplitude_estimate(target, bits, child, counter)
        for target, child in zip(targets, seeds)
    )
    if b.estimate > 0.0:
        sin2_phi_x = min(1.0, bx.estimate / b.estimate)
        x_error = (bx.bound + sin2_phi_x * b.bound) / b.estimate
    else:
        sin2_phi_x, x_error = 0.0, 1.0
    return PipelineAmplitudes(
        sin2_phi_b=b.estimate,
        sin2_phi_x=sin2_phi_x,
        sin2_phi_r=r.estimate,
        p_1110=p0.estimate,
        p_1111=p1.estimate,
        dimension=exact.dimension,
        inversion_constant=exact.inversion_constant,
        sin2_phi_b_error=b.bound,
        sin2_phi_x_error=x_error,
        sin2_phi_r_error=r.bound,
        p_1110_error=p0.bound,
        p_1111_error=p1.bound,
    )


def estimate_pipeline_amplitudes(
    hamiltonian: SparseMatrixOracle,
    b_oracle: VectorOracle,
    r_oracle: VectorOracle,
    params: QlsaParams,
    clock_qubits: int,
    *,
    bits: int | None = None,
    seed: int = 0,
    counter: QueryCounter | None = None,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> PipelineAmplitudes:
    """Run the solver and the swap test and read out the five probabilities.

    Args:
        hamiltonian: the Hermitian system matrix.
        b_oracle: the oracle of the right-hand side.
        r_oracle: the oracle of the readout vector.
        params: the run parameters.
        clock_qubits: the number of clock qubits of the solver.
        bits: the number of amplitude estimation bits; `None` for the exact
            probabilities.
        seed: the root seed of the estimations.
        counter: counters to update, optional.
        qubit_cap: the largest number of qubits allowed.

    Returns:
        The probabilities, with error bounds when estimated.
    """
    result = run_qlsa(
        hamiltonian,
        b_oracle,
        params,
        clock_qubits,
        counter=counter,
        qubit_cap=qubit_cap,
    )
    exact = swap_test(result, r_oracle, counter)
    if bits is None:
        return exact
    return estimate_amplitudes(exact, bits, seed, counter)


def _ratio_estimate(
    state: StateVector,
    numerator: Mapping[Register, int],
    denominator: Mapping[Register, int],
    bits: int | None,
    seed: int,
) -> float:
    first, second = np.random.SeedSequence(seed).spawn(2)
    top = amplitude_estimate(state, numerator, bits, first).estimate
    bottom = amplitude_estimate(state, denominator, bits, second).estimate
    if bottom <= 0.0:
        raise ContractViolationError("the solution branch has probability 0")
    return top / bottom


def moment_estimate(
    result: QlsaResult,
    observable: npt.ArrayLike,
    n: int,
    *,
    bits: int | None = None,
    seed: int = 0,
) -> float:
    """Estimate the moment `⟨x|D^n|x⟩` of a diagonal observable.

    A fresh ancilla `a_m` is rotated, controlled on `|j⟩`, so that its `|1⟩`
    amplitude is `f_j^(n/2)`. The moment is the probability of `a_m = 1`
    inside the solution branch.

    Args:
        result: the outcome of a solver run.
        observable: the diagonal `f_j ∈ [0, 1]`, of the unpadded dimension.
        n: the moment order.
        bits: the number of amplitude estimation bits; `None` for the exact
            value.
        seed: the root seed of the estimations.

    Returns:
        The moment.

    Raises:
        ValueError: if `n` is negative.
        ContractViolationError: if the observable has the wrong size or
            values outside `[0, 1]`.
    """
    if n < 0:
        raise ValueError(f"moment order ({n}) must not be negative")
    values = np.asarray(observable, dtype=np.float64).reshape(-1)
    if len(values) != result.dim:
        raise ContractViolationError(
            f"observable of dimension {len(values)}, expected {result.dim}"
        )
    if np.any(values < 0.0) or np.any(values > 1.0):
        raise ContractViolationError("observable values must lie in [0, 1]")

    layout = result.state.layout.with_moment()
    padded = np.zeros(layout.system_size)
    padded[: result.dim] = values**n
    state = result.state.extend(layout, {})
    axes = (layout.axis(Register.SYSTEM), layout.axis(Register.MOMENT))
    tensor = np.moveaxis(state.amplitudes, axes, (0, 1))
    extra = (1,) * (tensor.ndim - 2)
    weights = padded.reshape((-1,) + extra)
    start = tensor[:, 0].copy()
    tensor[:, 0] = np.sqrt(1.0 - weights) * start
    tensor[:, 1] = np.sqrt(weights) * start
    state = state.with_amplitudes(np.moveaxis(tensor, (0, 1), axes))
    state.check_norm("moment rotation")
    return _ratio_estimate(
        state, {**_SOLUTION, Register.MOMENT: 1}, _SOLUTION, bits, seed
    )


def entry_probability(
    result: QlsaResult, j: int, *, bits: int | None = None, seed: int = 0
) -> float:
    """Estimate `|x_j|²` of the normalized solution.

    Args:
        result: the outcome of a solver run.
        j: the entry index.
        bits: the number of amplitude estimation bits; `None` for the exact
            value.
        seed: the root seed of the estimations.

    Returns:
        The probability of entry `j` inside the solution branch.

    Raises:
        IndexError: if `j` is out of range.
    """
    if not 0 <= j < result.dim:
        raise IndexError(f"entry {j} out of range for dimension {result.dim}")
    return _ratio_estimate(
        result.state, {**_SOLUTION, Register.SYSTEM: j}, _SOLUTION, bits, seed
    )


def solution_entry(
    hamiltonian: SparseMatrixOracle,
    b_oracle: VectorOracle,
    params: QlsaParams,
    j: int,
    *,
    clock_qubits: int,
    bits: int | None = None,
    seed: int = 0,
    counter: QueryCounter | None = None,
) -> float:
    """Run the solver and estimate a single `|x_j|²`.

    Args:
        hamiltonian: the Hermitian system matrix.
        b_oracle: the oracle of the right-hand side.
        params: the run parameters.
        j: the entry index.
        clock_qubits: the number of clock qubits of the solver.
        bits: the number of amplitude estimation bits; `None` for the exact
            value.
        seed: the root seed of the estimations.
        counter: counters to update, optional.

    Returns:
        The probability of entry `j` of the normalized solution.

    Raises:
        IndexError: if `j` is out of range.
    """
    if not 0 <= j < hamiltonian.dim:
        raise IndexError(f"entry {j} out of range for dimension {hamiltonian.dim}")
    result = run_qlsa(hamiltonian, b_oracle, params, clock_qubits, counter=counter)
    return entry_probability(result, j, bits=bits, seed=seed)
