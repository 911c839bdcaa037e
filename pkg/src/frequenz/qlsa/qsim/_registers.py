# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Quantum registers and the exact statevector they live in.

The statevector is stored as a tensor with one axis per register rather than
one per qubit, so gates acting on a whole register are plain `numpy`
operations along an axis.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import enum
import logging
from collections.abc import Mapping
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .._internal._constants import (
    DEFAULT_QUBIT_CAP,
    NORM_TOLERANCE,
    STATE_DUMP_DIMENSION_CAP,
)
from ..linalg import ComplexArray, ContractViolationError

_logger = logging.getLogger(__name__)


class Register(enum.Enum):
    """The registers of the solver circuit, in their global axis order."""

    CLOCK = "clock"
    """The phase estimation register of `t` qubits."""

    SYSTEM = "system"
    """The register holding `|b⟩` and later `|x⟩`."""

    PREPARATION = "a_b"
    """The ancilla flagging a successful preparation of `|b⟩`."""

    INVERSION = "a_x"
    """The ancilla rotated by the eigenvalue inversion."""

    REFERENCE = "reference"
    """The register holding the readout vector `|R⟩`."""

    REFERENCE_FLAG = "a_r"
    """The ancilla flagging a successful preparation of `|R⟩`."""

    SWAP = "a_s"
    """The control ancilla of the swap test."""

    MOMENT = "a_m"
    """The ancilla rotated by a diagonal observable for moment readout."""


_QUBITS_ONE = (
    Register.PREPARATION,
    Register.INVERSION,
    Register.REFERENCE_FLAG,
    Register.SWAP,
    Register.MOMENT,
)


@dataclass(frozen=True)
class RegisterLayout:
    """The registers of a simulation and their sizes."""

    clock_qubits: int
    """The number of clock qubits `t`, so the clock has `T = 2^t` values."""

    system_qubits: int
    """The number of qubits of the (padded) system register."""

    readout: bool = False
    """Whether the reference and swap test registers are present."""

    moment: bool = False
    """Whether the moment ancilla is present."""

    qubit_cap: int = DEFAULT_QUBIT_CAP
    """The largest total number of qubits a statevector may have."""

    def __post_init__(self) -> None:
        """Check the register sizes.

        Raises:
            ValueError: if a register size is negative or the clock is empty.
            ContractViolationError: if the layout exceeds the qubit cap.
        """
        if self.clock_qubits < 1:
            raise ValueError(f"clock_qubits ({self.clock_qubits}) must be positive")
        if self.system_qubits < 0:
            raise ValueError(
                f"system_qubits ({self.system_qubits}) must not be negative"
            )
        if self.total_qubits > self.qubit_cap:
            raise ContractViolationError(
                f"layout needs {self.total_qubits} qubits, "
                f"more than the cap of {self.qubit_cap}"
            )

    @property
    def clock_size(self) -> int:
        """The number of clock values `T`."""
        return 1 << self.clock_qubits

    @property
    def system_size(self) -> int:
        """The dimension of the system register."""
        return 1 << self.system_qubits

    @property
    def registers(self) -> tuple[Register, ...]:
        """The registers present, in axis order."""
        registers = [
            Register.CLOCK,
            Register.SYSTEM,
            Register.PREPARATION,
            Register.INVERSION,
        ]
        if self.readout:
            registers += [Register.REFERENCE, Register.REFERENCE_FLAG, Register.SWAP]
        if self.moment:
            registers.append(Register.MOMENT)
        return tuple(registers)

    def size(self, register: Register) -> int:
        """Get the number of basis states of a register.

        Args:
            register: the register.

        Returns:
            The register dimension.
        """
        if register is Register.CLOCK:
            return self.clock_size
        if register in (Register.SYSTEM, Register.REFERENCE):
            return self.system_size
        assert register in _QUBITS_ONE
        return 2

    def axis(self, register: Register) -> int:
        """Get the tensor axis of a register.

        Args:
            register: the register.

        Returns:
            The axis index.

        Raises:
            ContractViolationError: if the register is not part of the layout.
        """
        try:
            return self.registers.index(register)
        except ValueError as err:
            raise ContractViolationError(
                f"register {register.value} is not part of this layout"
            ) from err

    @property
    def shape(self) -> tuple[int, ...]:
        """The shape of the statevector tensor."""
        return tuple(self.size(register) for register in self.registers)

    @property
    def dimension(self) -> int:
        """The total number of amplitudes."""
        return int(np.prod(self.shape))

    @property
    def total_qubits(self) -> int:
        """The total number of qubits."""
        qubits = self.clock_qubits + self.system_qubits + 2
        if self.readout:
            qubits += self.system_qubits + 2
        if self.moment:
            qubits += 1
        return qubits

    def with_readout(self) -> RegisterLayout:
        """Get this layout with the swap test registers added.

        Returns:
            The extended layout.
        """
        return replace(self, readout=True)

    def with_moment(self) -> RegisterLayout:
        """Get this layout with the moment ancilla added.

        Returns:
            The extended layout.
        """
        return replace(self, moment=True)


def _index(
    layout: RegisterLayout, fixed: Mapping[Register, int]
) -> tuple[object, ...]:
    index: list[object] = [slice(None)] * len(layout.registers)
    for register, value in fixed.items():
        size = layout.size(register)
        if not 0 <= value < size:
            raise IndexError(
                f"value {value} out of range for register {register.value} "
                f"of size {size}"
            )
        index[layout.axis(register)] = value
    return tuple(index)


class StateVector:
    """An exact complex statevector over a register layout.

    Stages of the pipeline never modify a state in place, they return a new
    one.
    """

    def __init__(
        self, layout: RegisterLayout, amplitudes: npt.ArrayLike | None = None
    ) -> None:
        """Create a state.

        Args:
            layout: the register layout.
            amplitudes: the amplitude tensor, shaped like `layout.shape` or
                flat. Defaults to the all-zero basis state.

        Raises:
            ContractViolationError: if the amplitudes don't fit the layout.
        """
        if amplitudes is None:
            tensor = np.zeros(layout.shape, dtype=np.complex128)
            tensor[(0,) * len(layout.shape)] = 1.0
        else:
            tensor = np.array(amplitudes, dtype=np.complex128)
            if tensor.size != layout.dimension:
                raise ContractViolationError(
                    f"{tensor.size} amplitudes do not fit a layout of "
                    f"dimension {layout.dimension}"
                )
            tensor = tensor.reshape(layout.shape)
        self._layout = layout
        self._amplitudes = tensor

    @property
    def layout(self) -> RegisterLayout:
        """The register layout."""
        return self._layout

    @property
    def amplitudes(self) -> ComplexArray:
        """A copy of the amplitude tensor."""
        return self._amplitudes.copy()

    def flat(self) -> ComplexArray:
        """Get the amplitudes as a flat vector in row-major register order.

        Returns:
            A copy of the amplitudes.
        """
        return self._amplitudes.reshape(-1).copy()

    def norm(self) -> float:
        """Get the Euclidean norm of the state.

        Returns:
            The norm.
        """
        return float(np.linalg.norm(self._amplitudes))

    def with_amplitudes(self, amplitudes: npt.ArrayLike) -> StateVector:
        """Get a state with the same layout and new amplitudes.

        Args:
            amplitudes: the new amplitude tensor.

        Returns:
            The new state.
        """
        return StateVector(self._layout, amplitudes)

    def component(self, fixed: Mapping[Register, int]) -> ComplexArray:
        """Get the amplitudes with some registers fixed to given values.

        Args:
            fixed: the value of every fixed register.

        Returns:
            The sub-tensor over the remaining registers, in axis order.
        """
        return self._amplitudes[_index(self._layout, fixed)].copy()

    def probability(self, fixed: Mapping[Register, int]) -> float:
        """Get the probability of measuring the given register values.

        Args:
            fixed: the value of every measured register.

        Returns:
            The probability.
        """
        sub = self._amplitudes[_index(self._layout, fixed)]
        return float(np.sum(np.abs(sub) ** 2))

    def marginal(self, register: Register) -> npt.NDArray[np.float64]:
        """Get the measurement distribution of a single register.

        Args:
            register: the measured register.

        Returns:
            The probability of every value of the register.
        """
        axis = self._layout.axis(register)
        others = tuple(a for a in range(self._amplitudes.ndim) if a != axis)
        return np.asarray(np.sum(np.abs(self._amplitudes) ** 2, axis=others))

    def extend(
        self, layout: RegisterLayout, factors: Mapping[Register, npt.ArrayLike]
    ) -> StateVector:
        """Add registers in a product state.

        Args:
            layout: the larger layout.
            factors: the initial state of every added register. Registers
                left out start in `|0⟩`.

        Returns:
            The state on the larger layout.

        Raises:
            ContractViolationError: if the layouts are incompatible.
        """
        old = self._layout.registers
        if layout.clock_qubits != self._layout.clock_qubits or (
            layout.system_qubits != self._layout.system_qubits
        ):
            raise ContractViolationError("extended layouts must keep register sizes")
        if not set(old) <= set(layout.registers):
            raise ContractViolationError("extended layouts must keep all registers")
        added = [r for r in layout.registers if r not in old]
        tensor = self._amplitudes
        for register in added:
            if register in factors:
                vector = np.asarray(factors[register], dtype=np.complex128)
            else:
                vector = np.zeros(layout.size(register), dtype=np.complex128)
                vector[0] = 1.0
            if vector.shape != (layout.size(register),):
                raise ContractViolationError(
                    f"factor of register {register.value} has shape {vector.shape}"
                )
            tensor = np.multiply.outer(tensor, vector)
        current = list(old) + added
        source = [current.index(r) for r in layout.registers]
        tensor = np.moveaxis(tensor, source, list(range(len(source))))
        return StateVector(layout, tensor)

    def check_norm(self, stage: str) -> None:
        """Log the norm of the state after a pipeline stage.

        Args:
            stage: the name of the stage, for the log.
        """
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOLERANCE:
            _logger.warning("state norm %.15f after %s is not one", norm, stage)
        else:
            _logger.debug("state norm after %s: %.15f", stage, norm)

    def dump(self, path: str | Path) -> None:
        """Write every amplitude to a tab separated file.

        Args:
            path: the file to write.

        Raises:
            ContractViolationError: if the state is too large to dump.
        """
        if self._layout.dimension > STATE_DUMP_DIMENSION_CAP:
            raise ContractViolationError(
                f"state of dimension {self._layout.dimension} is larger than the "
                f"dump cap of {STATE_DUMP_DIMENSION_CAP}"
            )
        header = "\t".join([r.value for r in self._layout.registers] + ["re", "im"])
        lines = [header]
        for index in np.ndindex(*self._layout.shape):
            value = self._amplitudes[index]
            parts = [repr(float(value.real)), repr(float(value.imag))]
            columns = [str(i) for i in index] + parts
            lines.append("\t".join(columns))
        Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class QueryCounter:
    """Counters of the expensive operations a pipeline run performs."""

    oracle_queries: int = 0
    """Vector oracle calls; each state preparation costs two."""

    exponentials: int = 0
    """Applications of a single 1-sparse term exponential."""

    grover_iterations: int = 0
    """Applications of the amplitude estimation Grover iterate."""

    term_count: int = 0
    """The number of 1-sparse terms of the simulated Hamiltonian."""

    def reset(self) -> None:
        """Reset every counter to zero."""
        self.oracle_queries = 0
        self.exponentials = 0
        self.grover_iterations = 0
        self.term_count = 0
