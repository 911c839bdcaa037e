# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Vector oracles and the entangled state preparation built on them.

A vector `v` is accessed through an oracle returning, for every index `j`, a
magnitude `b_j ≥ 0` and a phase `φ_j ∈ [0, 2π)` with `v_j = b_j·e^{iφ_j}`.
Preparation loads the uniform superposition over `j`, writes the phase, and
rotates an ancilla so that its `|1⟩` branch carries `C·b_j`:

```
Σ_j e^{iφ_j}/√N · |j⟩ (√(1 − C²b_j²)|0⟩ + C·b_j|1⟩)
```

The `|1⟩` branch has probability `sin²φ = (C²/N)·Σ_j b_j²` and holds the
normalized vector.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.sparse

from ..linalg import (
    ComplexArray,
    ContractViolationError,
    SparseMatrixOracle,
    dilate_rhs,
    dilate_solution,
    hermitian_dilation,
)
from ._registers import QueryCounter, Register, RegisterLayout, StateVector

_logger = logging.getLogger(__name__)

_TWO_PI = 2.0 * math.pi

_SCALE_TOLERANCE = 1e-12
"""Relative slack allowed in `C·b_j ≤ 1` for round-off in the scale."""


@dataclass(frozen=True)
class VectorOracle:
    """Magnitude and phase oracle over a complex vector."""

    amplitudes: npt.NDArray[np.float64]
    """The magnitudes `b_j ≥ 0`."""

    phases: npt.NDArray[np.float64]
    """The phases `φ_j ∈ [0, 2π)`."""

    scale: float
    """The scale `C` with `C·b_j ≤ 1` for all `j`."""

    def __post_init__(self) -> None:
        """Check the oracle contract.

        Raises:
            ContractViolationError: if shapes differ, a magnitude is negative,
                a phase is out of range or `C·b_j > 1` for some `j`.
        """
        if self.amplitudes.shape != self.phases.shape or self.amplitudes.ndim != 1:
            raise ContractViolationError("amplitudes and phases must be equal-length")
        if len(self.amplitudes) == 0:
            raise ContractViolationError("vector oracles must not be empty")
        if np.any(self.amplitudes < 0.0):
            raise ContractViolationError("amplitudes must be non-negative")
        if np.any(self.phases < 0.0) or np.any(self.phases >= _TWO_PI):
            raise ContractViolationError("phases must lie in [0, 2π)")
        if self.scale <= 0.0:
            raise ContractViolationError(f"scale ({self.scale}) must be positive")
        largest = float(np.max(self.amplitudes)) * self.scale
        if largest > 1.0 + _SCALE_TOLERANCE:
            raise ContractViolationError(
                f"scale {self.scale} too large: C·max(b) = {largest} > 1"
            )

    @classmethod
    def from_vector(
        cls, vector: npt.ArrayLike, scale: float | None = None
    ) -> VectorOracle:
        """Create the oracle of a complex vector.

        Negative real entries get the phase `π`.

        Args:
            vector: the vector.
            scale: the scale `C`. Defaults to `1/max_j |v_j|`, the largest
                allowed value, or 1 for the zero vector.

        Returns:
            The oracle.
        """
        values = np.asarray(vector, dtype=np.complex128).reshape(-1)
        amplitudes = np.abs(values)
        phases = np.mod(np.angle(values), _TWO_PI)
        # np.mod can round a tiny negative angle up to exactly 2π.
        phases[phases >= _TWO_PI] = 0.0
        if scale is None:
            largest = float(np.max(amplitudes)) if len(amplitudes) else 0.0
            scale = 1.0 / largest if largest > 0.0 else 1.0
        return cls(amplitudes=amplitudes, phases=phases, scale=scale)

    @property
    def dim(self) -> int:
        """The vector dimension."""
        return len(self.amplitudes)

    def query(self, j: int) -> tuple[float, float]:
        """Query the magnitude and phase of an entry.

        Args:
            j: the entry index.

        Returns:
            The pair `(b_j, φ_j)`.

        Raises:
            IndexError: if `j` is out of range.
        """
        if not 0 <= j < self.dim:
            raise IndexError(f"entry {j} out of range for dimension {self.dim}")
        return float(self.amplitudes[j]), float(self.phases[j])

    @property
    def vector(self) -> ComplexArray:
        """The vector `b_j·e^{iφ_j}`."""
        return self.amplitudes * np.exp(1j * self.phases)

    @property
    def sin2(self) -> float:
        """The preparation success probability `(C²/N)·Σ_j b_j²`."""
        return float(self.scale**2 * np.sum(self.amplitudes**2) / self.dim)

    def padded(self, dim: int) -> VectorOracle:
        """Get the oracle of the vector padded with zeros.

        Args:
            dim: the new dimension.

        Returns:
            The padded oracle, with the same scale.

        Raises:
            ValueError: if the new dimension is smaller.
        """
        if dim < self.dim:
            raise ValueError(f"cannot pad dimension {self.dim} down to {dim}")
        extra = np.zeros(dim - self.dim)
        return VectorOracle(
            amplitudes=np.concatenate([self.amplitudes, extra]),
            phases=np.concatenate([self.phases, extra]),
            scale=self.scale,
        )


def embed_system(matrix: SparseMatrixOracle, dim: int) -> SparseMatrixOracle:
    """Pad a matrix with zero rows and columns.

    The added basis states are eigenvectors of eigenvalue 0, which the
    eigenvalue inversion filters out.

    Args:
        matrix: the matrix.
        dim: the new dimension.

    Returns:
        The padded matrix, Hermitian if the original is.

    Raises:
        ValueError: if the new dimension is smaller.
    """
    if dim < matrix.dim:
        raise ValueError(f"cannot pad dimension {matrix.dim} down to {dim}")
    if dim == matrix.dim:
        return matrix
    padded = scipy.sparse.block_diag(
        [matrix.to_csr(), scipy.sparse.csr_matrix((dim - matrix.dim,) * 2)],
        format="csr",
    )
    return SparseMatrixOracle(padded, hermitian=matrix.hermitian or None)


@dataclass(frozen=True)
class DilatedProblem:
    """A linear system made Hermitian, with its vector oracles."""

    hamiltonian: SparseMatrixOracle
    """The Hermitian matrix used as Hamiltonian."""

    rhs: VectorOracle
    """The oracle of the right-hand side."""

    reference: VectorOracle | None
    """The oracle of the readout vector, if any."""

    dilated: bool
    """Whether the system was dilated, placing `x` in the lower half."""


def prepare_dilated_oracles(
    matrix: SparseMatrixOracle,
    rhs: npt.ArrayLike,
    reference: npt.ArrayLike | None = None,
) -> DilatedProblem:
    """Turn a linear system into a Hermitian problem with vector oracles.

    Hermitian systems are kept as they are. Others are dilated: the
    right-hand side becomes `(b, 0)` and the readout vector `(0, R)`, so the
    overlap with the dilated solution `(0, x)` equals `⟨R|x⟩`.

    Args:
        matrix: the system matrix.
        rhs: the right-hand side.
        reference: the readout vector, optional.

    Returns:
        The Hermitian problem.
    """
    if matrix.hermitian:
        return DilatedProblem(
            hamiltonian=matrix,
            rhs=VectorOracle.from_vector(rhs),
            reference=(
                None if reference is None else VectorOracle.from_vector(reference)
            ),
            dilated=False,
        )
    _logger.debug("dilating non-Hermitian %s", matrix)
    return DilatedProblem(
        hamiltonian=hermitian_dilation(matrix),
        rhs=VectorOracle.from_vector(dilate_rhs(rhs)),
        reference=(
            None
            if reference is None
            else VectorOracle.from_vector(dilate_solution(reference))
        ),
        dilated=True,
    )


def _prepared_block(oracle: VectorOracle) -> ComplexArray:
    """Get the `(N, 2)` block of the prepared register and its flag ancilla."""
    phases = np.exp(1j * oracle.phases) / math.sqrt(oracle.dim)
    loaded = np.clip(oracle.scale * oracle.amplitudes, 0.0, 1.0)
    block = np.empty((oracle.dim, 2), dtype=np.complex128)
    block[:, 0] = np.sqrt(1.0 - loaded**2) * phases
    block[:, 1] = loaded * phases
    return block


def load_vector(
    state: StateVector,
    oracle: VectorOracle,
    register: Register,
    flag: Register,
    counter: QueryCounter | None = None,
) -> StateVector:
    """Prepare a vector into a register and its flag ancilla.

    Both registers must be in `|0⟩`. Computing and uncomputing the oracle
    values costs two oracle queries.

    Args:
        state: the state to prepare into.
        oracle: the vector oracle.
        register: the register receiving the vector.
        flag: the ancilla flagging success.
        counter: query counters to update, optional.

    Returns:
        The prepared state.

    Raises:
        ContractViolationError: if the oracle dimension doesn't match the
            register or the registers are not in `|0⟩`.
    """
    layout = state.layout
    if oracle.dim != layout.size(register):
        raise ContractViolationError(
            f"oracle of dimension {oracle.dim} does not fit register "
            f"{register.value} of size {layout.size(register)}"
        )
    base = state.component({register: 0, flag: 0})
    if abs(float(np.sum(np.abs(base) ** 2)) - state.norm() ** 2) > 1e-12:
        raise ContractViolationError(
            f"registers {register.value} and {flag.value} must start in |0⟩"
        )
    tensor = np.multiply.outer(base, _prepared_block(oracle))
    others = [r for r in layout.registers if r not in (register, flag)]
    current = others + [register, flag]
    source = [current.index(r) for r in layout.registers]
    tensor = np.moveaxis(tensor, source, list(range(len(source))))
    if counter is not None:
        counter.oracle_queries += 2
    return state.with_amplitudes(tensor)


def prepare_entangled_state(
    oracle: VectorOracle,
    state: StateVector | RegisterLayout,
    counter: QueryCounter | None = None,
) -> StateVector:
    """Prepare the right-hand side into the system register.

    After preparation the amplitude of `|j⟩|1⟩_{a_b}` is `C·b_j·e^{iφ_j}/√N`
    and the amplitude of `|j⟩|0⟩_{a_b}` is `√(1 − C²b_j²)·e^{iφ_j}/√N`.

    Args:
        oracle: the oracle of `b`, padded to the system register size.
        state: a state with the system and preparation registers in `|0⟩`, or
            a layout to start from the all-zero state of.
        counter: query counters to update, optional.

    Returns:
        The prepared state.
    """
    if isinstance(state, RegisterLayout):
        state = StateVector(state)
    prepared = load_vector(
        state, oracle, Register.SYSTEM, Register.PREPARATION, counter
    )
    prepared.check_norm("state preparation")
    return prepared
