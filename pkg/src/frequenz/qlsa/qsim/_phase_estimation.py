# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Quantum phase estimation over the clock register."""

import logging
import math
from typing import Protocol

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..linalg import ComplexArray, ContractViolationError
from ._evolution import Evolution
from ._registers import Register, StateVector

_logger = logging.getLogger(__name__)


class ControlledUnitary(Protocol):
    """A unitary whose powers can be applied to the system register."""

    @property
    def dim(self) -> int:
        """The dimension the unitary acts on."""

    def apply_power(self, vectors: ComplexArray, power: int) -> ComplexArray:
        """Apply `U^power` along the first axis.

        Args:
            vectors: an array whose first axis has length `dim`.
            power: the exponent, negative for powers of the inverse.

        Returns:
            The transformed array.
        """


class HamiltonianUnitary:
    """The unitary `U = exp(iH·t0/T)` phase estimation is run on.

    `U^ℓ` is the evolution over `ℓ·t0/T`, so an eigenvalue `λ` turns into the
    phase `λ·t0/(2π)` measured in clock steps.
    """

    def __init__(self, evolution: Evolution, t0: float, clock_size: int) -> None:
        """Create the unitary.

        Args:
            evolution: the backend applying `exp(iHt)`.
            t0: the evolution time scale.
            clock_size: the number of clock values `T`.
        """
        self._evolution = evolution
        self._time = t0 / clock_size

    @property
    def dim(self) -> int:
        """The dimension of `H`."""
        return self._evolution.dim

    def apply_power(self, vectors: ComplexArray, power: int) -> ComplexArray:
        """Apply `U^power` along the first axis.

        Args:
            vectors: an array whose first axis has length `dim`.
            power: the exponent, negative for powers of the inverse.

        Returns:
            The evolved array.
        """
        return self._evolution.apply_power(vectors, self._time, power)


def signed_clock_values(
    clock_size: int, signed: bool = True
) -> npt.NDArray[np.int64]:
    """Get the integer every clock value stands for.

    Args:
        clock_size: the number of clock values `T`.
        signed: whether values from `T/2` on are read in two's complement.

    Returns:
        The integer of every clock value.
    """
    values = np.arange(clock_size, dtype=np.int64)
    if signed:
        values[values >= clock_size // 2] -= clock_size
    return values


def grid_eigenvalues(
    clock_size: int, t0: float, signed: bool = True
) -> npt.NDArray[np.float64]:
    """Get the eigenvalue every clock value encodes, `2π·ℓ/t0`.

    Args:
        clock_size: the number of clock values `T`.
        t0: the evolution time scale.
        signed: whether the clock is read in two's complement.

    Returns:
        The eigenvalue of every clock value.
    """
    return 2.0 * math.pi * signed_clock_values(clock_size, signed) / t0


def _hadamard(tensor: ComplexArray, axis: int) -> ComplexArray:
    size = tensor.shape[axis]
    # Sylvester's construction is the tensor power of the one-qubit Hadamard
    # in binary register order.
    matrix = scipy.linalg.hadamard(size) / math.sqrt(size)
    moved = np.moveaxis(tensor, axis, 0)
    return np.moveaxis(np.tensordot(matrix, moved, axes=1), 0, axis)


def _controlled_powers(
    unitary: ControlledUnitary, tensor: ComplexArray, clock_axis: int, sign: int
) -> ComplexArray:
    # The system register sits on axis 0 of `tensor`.
    clock_size = tensor.shape[clock_axis]
    clock_values = np.arange(clock_size)
    index: list[object] = [slice(None)] * tensor.ndim
    for bit in range(clock_size.bit_length() - 1):
        index[clock_axis] = (clock_values >> bit) & 1 == 1
        selected = tuple(index)
        tensor[selected] = unitary.apply_power(tensor[selected], sign * (1 << bit))
    return tensor


def phase_estimation(
    unitary: ControlledUnitary, state: StateVector, *, inverse: bool = False
) -> StateVector:
    """Run phase estimation, or its inverse, on the clock register.

    The forward pass applies Hadamards to the clock, `U^(2^j)` controlled by
    clock qubit `j`, and the inverse quantum Fourier transform. An eigenvector
    with `U|u⟩ = exp(2πi·φ)|u⟩` leaves the clock concentrated at `φ·T`; when
    `φ·T` is an integer the clock is deterministic. The inverse pass undoes
    these steps in reverse order.

    Args:
        unitary: the unitary acting on the system register.
        state: the state; its clock must be in `|0⟩` for the forward pass.
        inverse: whether to run the inverse pass.

    Returns:
        The transformed state.

    Raises:
        ContractViolationError: if the unitary does not fit the system
            register or the clock is not in `|0⟩` before the forward pass.
    """
    layout = state.layout
    if unitary.dim != layout.system_size:
        raise ContractViolationError(
            f"unitary of dimension {unitary.dim} does not fit a system register "
            f"of size {layout.system_size}"
        )
    if not inverse:
        leftover = state.norm() ** 2 - state.probability({Register.CLOCK: 0})
        if leftover > 1e-12:
            raise ContractViolationError("phase estimation needs the clock in |0⟩")

    system_axis = layout.axis(Register.SYSTEM)
    tensor = np.moveaxis(state.amplitudes, system_axis, 0)
    clock_axis = layout.axis(Register.CLOCK)
    if clock_axis < system_axis:
        clock_axis += 1

    if not inverse:
        tensor = _hadamard(tensor, clock_axis)
        tensor = _controlled_powers(unitary, tensor, clock_axis, 1)
        tensor = np.fft.fft(tensor, axis=clock_axis, norm="ortho")
    else:
        tensor = np.fft.ifft(tensor, axis=clock_axis, norm="ortho")
        tensor = _controlled_powers(unitary, tensor, clock_axis, -1)
        tensor = _hadamard(tensor, clock_axis)

    result = state.with_amplitudes(np.moveaxis(tensor, 0, system_axis))
    result.check_norm("inverse phase estimation" if inverse else "phase estimation")
    return result
