# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Hamiltonian simulation backends applying `exp(iHt)`.

The exact backend diagonalizes `H` once. The Trotter backend applies a
product formula over the 1-sparse terms of `H`, each of which has an exact
exponential, and counts every term exponential it applies.
"""

import abc
import logging
import math
from collections.abc import Callable, Sequence

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..linalg import (
    ComplexArray,
    ContractViolationError,
    OneSparseTerm,
    SparseMatrixOracle,
    one_sparse_decomposition,
)
from ._registers import QueryCounter, Register, StateVector

_logger = logging.getLogger(__name__)


def exponentials_per_step(terms: int, order: int) -> int:
    """Count the term exponentials of one product formula step.

    A first order step applies every term once. The second order step is
    symmetric, so its middle exponential is merged: `2m − 1`. Every Suzuki
    recursion level multiplies the count by 5.

    Args:
        terms: the number of terms `m`.
        order: the product formula order, 1 or even.

    Returns:
        The number of exponentials.
    """
    _check_order(order)
    if order == 1:
        return terms
    return 5 ** (order // 2 - 1) * (2 * terms - 1)


def exponential_count(
    terms: int, order: int, steps: int, repetitions: int = 1
) -> int:
    """Count the term exponentials of repeated product formula evolutions.

    Args:
        terms: the number of terms `m`.
        order: the product formula order.
        steps: the number of steps per evolution.
        repetitions: the number of evolutions.

    Returns:
        The number of exponentials.
    """
    return exponentials_per_step(terms, order) * steps * repetitions


def suzuki_exponential_bound(terms: int, tau: float, epsilon: float) -> float:
    """Evaluate the optimal-order Suzuki bound on the number of exponentials.

    The bound is `2m²τ·exp(2√(ln 5 · ln(mτ/ε)))` for `m` terms, a scaled
    evolution time `τ` and a target error `ε`.

    Args:
        terms: the number of terms `m`.
        tau: the scaled evolution time `τ`.
        epsilon: the target error.

    Returns:
        The bound.

    Raises:
        ValueError: if an argument is not positive.
    """
    if terms < 1 or tau <= 0.0 or epsilon <= 0.0:
        raise ValueError("terms, tau and epsilon must be positive")
    exponent = math.log(terms * tau / epsilon)
    growth = math.exp(2.0 * math.sqrt(math.log(5) * max(0.0, exponent)))
    return 2.0 * terms**2 * tau * growth


def _check_order(order: int) -> None:
    if order != 1 and (order < 2 or order % 2):
        raise ValueError(f"product formula order ({order}) must be 1 or even")


class Evolution(abc.ABC):
    """A backend applying `exp(iHt)` to stacks of vectors."""

    @property
    @abc.abstractmethod
    def dim(self) -> int:
        """The dimension of `H`."""

    @abc.abstractmethod
    def apply(self, vectors: ComplexArray, time: float) -> ComplexArray:
        """Apply `exp(iHt)` along the first axis.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time, negative for the inverse.

        Returns:
            The evolved array.
        """

    def apply_power(
        self, vectors: ComplexArray, time: float, power: int
    ) -> ComplexArray:
        """Apply the `power`-th power of the evolution over `time`.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time of one application.
            power: the number of applications, negative for the inverse.

        Returns:
            The evolved array.
        """
        result = vectors
        sign = 1.0 if power >= 0 else -1.0
        for _ in range(abs(power)):
            result = self.apply(result, sign * time)
        return result


class ExactEvolution(Evolution):
    """Exact evolution through the eigendecomposition of `H`."""

    def __init__(self, hamiltonian: SparseMatrixOracle | npt.ArrayLike) -> None:
        """Diagonalize the Hamiltonian.

        Args:
            hamiltonian: the Hermitian matrix `H`.

        Raises:
            ContractViolationError: if `H` is not Hermitian.
        """
        if isinstance(hamiltonian, SparseMatrixOracle):
            if not hamiltonian.hermitian:
                raise ContractViolationError("evolution needs a Hermitian matrix")
            dense = hamiltonian.to_dense()
        else:
            dense = np.asarray(hamiltonian, dtype=np.complex128)
            if not np.allclose(dense, dense.conj().T, rtol=0.0, atol=1e-12):
                raise ContractViolationError("evolution needs a Hermitian matrix")
        eigenvalues, eigenvectors = scipy.linalg.eigh(dense)
        self._eigenvalues: npt.NDArray[np.float64] = np.asarray(eigenvalues)
        self._eigenvectors: ComplexArray = np.asarray(eigenvectors, dtype=np.complex128)

    @property
    def dim(self) -> int:
        """The dimension of `H`."""
        return len(self._eigenvalues)

    @property
    def eigenvalues(self) -> npt.NDArray[np.float64]:
        """The eigenvalues of `H`, ascending."""
        return self._eigenvalues.copy()

    def apply(self, vectors: ComplexArray, time: float) -> ComplexArray:
        """Apply `exp(iHt)` along the first axis.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time.

        Returns:
            The evolved array.
        """
        source = np.asarray(vectors, dtype=np.complex128)
        flat = source.reshape(self.dim, -1)
        coefficients = self._eigenvectors.conj().T @ flat
        coefficients *= np.exp(1j * time * self._eigenvalues)[:, np.newaxis]
        return np.asarray(self._eigenvectors @ coefficients).reshape(source.shape)

    def apply_power(
        self, vectors: ComplexArray, time: float, power: int
    ) -> ComplexArray:
        """Apply `exp(iHt)^power` in a single step.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time of one application.
            power: the exponent, negative for the inverse.

        Returns:
            The evolved array.
        """
        return self.apply(vectors, time * power)


class TrotterEvolution(Evolution):
    """Product formula evolution over 1-sparse terms."""

    def __init__(
        self,
        terms: Sequence[OneSparseTerm],
        *,
        order: int = 2,
        steps: int = 1,
        counter: QueryCounter | None = None,
    ) -> None:
        """Create a product formula backend.

        Args:
            terms: the Hermitian 1-sparse terms summing to `H`.
            order: 1 for the plain product formula, or an even Suzuki order.
            steps: the number of steps `r` per evolution.
            counter: counters to record term exponentials in, optional.

        Raises:
            ValueError: if there are no terms, the order is invalid or
                `steps` is not positive.
        """
        if not terms:
            raise ValueError("product formulas need at least one term")
        _check_order(order)
        if steps < 1:
            raise ValueError(f"steps ({steps}) must be positive")
        dims = {term.dim for term in terms}
        if len(dims) != 1:
            raise ValueError(f"terms of different dimensions: {sorted(dims)}")
        self._terms = tuple(terms)
        self._dim = dims.pop()
        self._order = order
        self._steps = steps
        self._counter = counter

    @classmethod
    def from_hamiltonian(
        cls,
        hamiltonian: SparseMatrixOracle,
        *,
        order: int = 2,
        steps: int = 1,
        counter: QueryCounter | None = None,
    ) -> "TrotterEvolution":
        """Create a backend from the 1-sparse decomposition of `H`.

        Args:
            hamiltonian: the Hermitian matrix.
            order: the product formula order.
            steps: the number of steps per evolution.
            counter: counters to update, optional.

        Returns:
            The backend.
        """
        terms = one_sparse_decomposition(hamiltonian)
        if not terms:
            terms = [
                OneSparseTerm(
                    dim=hamiltonian.dim,
                    rows=np.zeros(0, dtype=np.int64),
                    cols=np.zeros(0, dtype=np.int64),
                    values=np.zeros(0, dtype=np.complex128),
                )
            ]
        if counter is not None:
            counter.term_count = len(terms)
        return cls(terms, order=order, steps=steps, counter=counter)

    @property
    def dim(self) -> int:
        """The dimension of `H`."""
        return self._dim

    @property
    def terms(self) -> tuple[OneSparseTerm, ...]:
        """The 1-sparse terms."""
        return self._terms

    @property
    def order(self) -> int:
        """The product formula order."""
        return self._order

    @property
    def steps(self) -> int:
        """The number of steps per evolution."""
        return self._steps

    def _exp(
        self, term: OneSparseTerm, vectors: ComplexArray, time: float
    ) -> ComplexArray:
        if self._counter is not None:
            self._counter.exponentials += 1
        return term.exponential_action(vectors, time)

    def _first_order(self, vectors: ComplexArray, dt: float) -> ComplexArray:
        # The inverse of a product is the reversed product of inverses.
        terms = self._terms if dt >= 0.0 else self._terms[::-1]
        for term in terms:
            vectors = self._exp(term, vectors, dt)
        return vectors

    def _second_order(self, vectors: ComplexArray, dt: float) -> ComplexArray:
        *outer, middle = self._terms
        for term in outer:
            vectors = self._exp(term, vectors, dt / 2.0)
        vectors = self._exp(middle, vectors, dt)
        for term in reversed(outer):
            vectors = self._exp(term, vectors, dt / 2.0)
        return vectors

    def _suzuki(self, order: int) -> Callable[[ComplexArray, float], ComplexArray]:
        if order == 2:
            return self._second_order
        lower = self._suzuki(order - 2)
        p = 1.0 / (4.0 - 4.0 ** (1.0 / (order - 1)))

        def step(vectors: ComplexArray, dt: float) -> ComplexArray:
            vectors = lower(lower(vectors, p * dt), p * dt)
            vectors = lower(vectors, (1.0 - 4.0 * p) * dt)
            return lower(lower(vectors, p * dt), p * dt)

        return step

    def apply(self, vectors: ComplexArray, time: float) -> ComplexArray:
        """Apply the product formula approximation of `exp(iHt)`.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time, negative for the exact inverse of the
                formula at the positive time.

        Returns:
            The evolved array.
        """
        step = self._first_order if self._order == 1 else self._suzuki(self._order)
        result = np.asarray(vectors, dtype=np.complex128)
        dt = time / self._steps
        for _ in range(self._steps):
            result = step(result, dt)
        return result


def _on_system(
    state: StateVector,
    evolve: Callable[[ComplexArray], ComplexArray],
    control: int | None,
) -> StateVector:
    layout = state.layout
    tensor = np.moveaxis(state.amplitudes, layout.axis(Register.SYSTEM), 0)
    clock_axis = layout.axis(Register.CLOCK)
    # The clock axis shifts by one when the system axis (after it) moves first.
    system_axis = layout.axis(Register.SYSTEM)
    moved_clock = clock_axis + 1 if clock_axis < system_axis else clock_axis
    if control is None:
        tensor = evolve(tensor)
    else:
        if not 0 <= control < layout.clock_qubits:
            raise IndexError(f"control qubit {control} out of range")
        selected = (np.arange(layout.clock_size) >> control) & 1 == 1
        index: list[object] = [slice(None)] * tensor.ndim
        index[moved_clock] = selected
        tensor[tuple(index)] = evolve(tensor[tuple(index)])
    return state.with_amplitudes(
        np.moveaxis(tensor, 0, layout.axis(Register.SYSTEM))
    )


def evolve_exact(
    hamiltonian: SparseMatrixOracle | ExactEvolution,
    time: float,
    state: StateVector,
    control: int | None = None,
) -> StateVector:
    """Apply `exp(iHt)` to the system register exactly.

    Args:
        hamiltonian: the Hermitian matrix, or its prepared exact backend.
        time: the evolution time.
        state: the state.
        control: a clock qubit controlling the evolution, optional.

    Returns:
        The evolved state.
    """
    backend = (
        hamiltonian
        if isinstance(hamiltonian, ExactEvolution)
        else ExactEvolution(hamiltonian)
    )
    return _on_system(state, lambda v: backend.apply(v, time), control)


def evolve_trotter(
    terms: Sequence[OneSparseTerm],
    time: float,
    order: int,
    steps: int,
    state: StateVector,
    *,
    control: int | None = None,
    counter: QueryCounter | None = None,
) -> StateVector:
    """Apply a product formula approximation of `exp(iHt)` to the system register.

    Args:
        terms: the 1-sparse terms summing to `H`.
        time: the evolution time.
        order: the product formula order.
        steps: the number of steps.
        state: the state.
        control: a clock qubit controlling the evolution, optional.
        counter: counters to record term exponentials in, optional.

    Returns:
        The evolved state.
    """
    backend = TrotterEvolution(terms, order=order, steps=steps, counter=counter)
    return _on_system(state, lambda v: backend.apply(v, time), control)
