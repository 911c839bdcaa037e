# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for phase estimation on the clock register."""

import math

import numpy as np
import pytest

from frequenz.qlsa.linalg import (
    ContractViolationError,
    diagonal_matrix,
    random_hermitian,
)
from frequenz.qlsa.qsim import (
    ExactEvolution,
    HamiltonianUnitary,
    Register,
    RegisterLayout,
    StateVector,
    TrotterEvolution,
    grid_eigenvalues,
    phase_estimation,
    signed_clock_values,
)


def _eigenvector_state(layout: RegisterLayout, index: int) -> StateVector:
    amplitudes = np.zeros(layout.shape, dtype=np.complex128)
    amplitudes[0, index, 0, 0] = 1.0
    return StateVector(layout, amplitudes)


def _unitary(values: list[float], t0: float, clock_qubits: int) -> HamiltonianUnitary:
    return HamiltonianUnitary(
        ExactEvolution(diagonal_matrix(values)), t0, 1 << clock_qubits
    )


class TestPhaseEstimation:
    """Tests for `phase_estimation`."""

    def test_exact_grid_value(self) -> None:
        """An eigenvalue on the grid gives a deterministic clock."""
        t0 = 1.0
        unitary = _unitary([2 * math.pi * 5 / t0, 2 * math.pi * 3 / t0], t0, 4)
        layout = RegisterLayout(clock_qubits=4, system_qubits=1)
        state = phase_estimation(unitary, _eigenvector_state(layout, 0))
        assert state.probability({Register.CLOCK: 5}) == pytest.approx(1.0, abs=1e-12)

    def test_negative_eigenvalue(self) -> None:
        """Negative eigenvalues land in two's complement."""
        t0 = 2 * math.pi
        unitary = _unitary([1.0, -3.0], t0, 3)
        layout = RegisterLayout(clock_qubits=3, system_qubits=1)
        state = phase_estimation(unitary, _eigenvector_state(layout, 1))
        assert state.probability({Register.CLOCK: 5}) == pytest.approx(1.0, abs=1e-12)

    def test_zero_hamiltonian(self) -> None:
        """`H = 0` leaves the clock at 0."""
        unitary = HamiltonianUnitary(ExactEvolution(np.zeros((2, 2))), 1.0, 8)
        layout = RegisterLayout(clock_qubits=3, system_qubits=1)
        state = phase_estimation(unitary, _eigenvector_state(layout, 1))
        assert state.probability({Register.CLOCK: 0}) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("phase", [5.3, 2.75, 0.1])
    def test_dirichlet_profile(self, phase: float) -> None:
        """Off-grid eigenvalues give the squared Dirichlet kernel."""
        t0 = 1.0
        clock_qubits = 4
        size = 1 << clock_qubits
        unitary = _unitary([2 * math.pi * phase / t0, 0.0], t0, clock_qubits)
        layout = RegisterLayout(clock_qubits=clock_qubits, system_qubits=1)
        distribution = phase_estimation(
            unitary, _eigenvector_state(layout, 0)
        ).marginal(Register.CLOCK)
        delta = phase - np.arange(size)
        kernel = np.sin(math.pi * delta) / (size * np.sin(math.pi * delta / size))
        np.testing.assert_allclose(distribution, kernel**2, atol=1e-8)

    @pytest.mark.parametrize("order", [1, 2])
    def test_inverse_restores(self, order: int) -> None:
        """The inverse pass undoes the forward pass."""
        rng = np.random.default_rng(0)
        layout = RegisterLayout(clock_qubits=3, system_qubits=2)
        amplitudes = np.zeros(layout.shape, dtype=np.complex128)
        amplitudes[0, :, 0, 0] = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = StateVector(layout, amplitudes / np.linalg.norm(amplitudes))
        matrix = random_hermitian(4, 2, rng)
        backend = TrotterEvolution.from_hamiltonian(matrix, order=order, steps=2)
        unitary = HamiltonianUnitary(backend, 1.7, layout.clock_size)
        forward = phase_estimation(unitary, state)
        restored = phase_estimation(unitary, forward, inverse=True)
        np.testing.assert_allclose(restored.flat(), state.flat(), atol=1e-12)

    def test_clock_not_zero(self) -> None:
        """The forward pass needs a clear clock."""
        layout = RegisterLayout(clock_qubits=2, system_qubits=1)
        amplitudes = np.zeros(layout.shape, dtype=np.complex128)
        amplitudes[1, 0, 0, 0] = 1.0
        with pytest.raises(ContractViolationError):
            phase_estimation(
                _unitary([1.0, 2.0], 1.0, 2), StateVector(layout, amplitudes)
            )

    def test_dimension_mismatch(self) -> None:
        """The unitary must fit the system register."""
        layout = RegisterLayout(clock_qubits=2, system_qubits=2)
        with pytest.raises(ContractViolationError):
            phase_estimation(_unitary([1.0, 2.0], 1.0, 2), StateVector(layout))


def test_grid() -> None:
    """Clock values map to `2π·ℓ/t0`, signed in two's complement."""
    np.testing.assert_array_equal(signed_clock_values(4), [0, 1, -2, -1])
    np.testing.assert_array_equal(signed_clock_values(4, signed=False), [0, 1, 2, 3])
    np.testing.assert_allclose(grid_eigenvalues(4, 2 * math.pi), [0, 1, -2, -1])
    np.testing.assert_allclose(grid_eigenvalues(4, math.pi, signed=False), [0, 2, 4, 6])
