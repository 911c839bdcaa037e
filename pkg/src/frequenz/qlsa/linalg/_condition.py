# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Condition numbers and eigen-expansions of desk-scale matrices."""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .._internal._constants import DENSE_DIMENSION_CAP, SINGULARITY_THRESHOLD
from ._exceptions import ContractViolationError, SingularMatrixError
from ._oracle import ComplexArray, SparseMatrixOracle

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionReport:
    """The spectral condition number of a matrix and its extreme singular values."""

    kappa: float
    """The condition number `sigma_max / sigma_min`."""

    sigma_max: float
    """The largest singular value."""

    sigma_min: float
    """The smallest singular value."""


@dataclass(frozen=True)
class Eigensystem:
    """Eigen-expansion of a vector in the eigenbasis of a Hermitian matrix."""

    eigenvalues: npt.NDArray[np.float64]
    """The eigenvalues `λ_j`, in ascending order."""

    eigenvectors: ComplexArray
    """The orthonormal eigenvectors `u_j`, as columns."""

    expansion: ComplexArray
    """The coefficients `β_j = ⟨u_j|v⟩` of the expanded vector."""

    def reconstruct(self) -> ComplexArray:
        """Rebuild the matrix as `Σ_j λ_j u_j u_j†`.

        Returns:
            The dense Hermitian matrix.
        """
        vectors = self.eigenvectors
        return np.asarray((vectors * self.eigenvalues) @ vectors.conj().T)


def _densify(matrix: SparseMatrixOracle | npt.ArrayLike) -> ComplexArray:
    if isinstance(matrix, SparseMatrixOracle):
        dim = matrix.dim
        dense = None
    else:
        dense = np.asarray(matrix, dtype=np.complex128)
        dim = dense.shape[0]
    if dim > DENSE_DIMENSION_CAP:
        raise ContractViolationError(
            f"dimension {dim} exceeds the dense cap of {DENSE_DIMENSION_CAP}"
        )
    if dense is None:
        assert isinstance(matrix, SparseMatrixOracle)
        dense = matrix.to_dense()
    return dense


def condition_number(matrix: SparseMatrixOracle | npt.ArrayLike) -> ConditionReport:
    """Compute the spectral condition number from a full SVD.

    Args:
        matrix: the square matrix, as an oracle or a dense array.

    Returns:
        The condition report.

    Raises:
        SingularMatrixError: if `sigma_min < 1e-12 · sigma_max`.
    """
    dense = _densify(matrix)
    singular_values = scipy.linalg.svdvals(dense)
    sigma_max = float(singular_values[0])
    sigma_min = float(singular_values[-1])
    if sigma_max == 0.0 or sigma_min < SINGULARITY_THRESHOLD * sigma_max:
        raise SingularMatrixError(
            f"matrix is singular: sigma_min={sigma_min}, sigma_max={sigma_max}"
        )
    report = ConditionReport(
        kappa=sigma_max / sigma_min, sigma_max=sigma_max, sigma_min=sigma_min
    )
    _logger.debug("condition number of %d-dim matrix: %s", dense.shape[0], report)
    return report


def eigensystem(
    hamiltonian: SparseMatrixOracle | npt.ArrayLike,
    vector: npt.ArrayLike | None = None,
) -> Eigensystem:
    """Diagonalize a Hermitian matrix and expand a vector in its eigenbasis.

    Args:
        hamiltonian: the Hermitian matrix.
        vector: the vector to expand. Defaults to the zero vector.

    Returns:
        The eigensystem.

    Raises:
        ContractViolationError: if the matrix is an oracle not flagged as
            Hermitian.
    """
    if isinstance(hamiltonian, SparseMatrixOracle) and not hamiltonian.hermitian:
        raise ContractViolationError("eigen-expansions need a Hermitian matrix")
    dense = _densify(hamiltonian)
    eigenvalues, eigenvectors = scipy.linalg.eigh(dense)
    if vector is None:
        expansion = np.zeros(dense.shape[0], dtype=np.complex128)
    else:
        expansion = eigenvectors.conj().T @ np.asarray(vector, dtype=np.complex128)
    return Eigensystem(
        eigenvalues=np.asarray(eigenvalues, dtype=np.float64),
        eigenvectors=np.asarray(eigenvectors, dtype=np.complex128),
        expansion=np.asarray(expansion, dtype=np.complex128),
    )
