# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Assembly of the finite-element scattering system.

The scattered field `u` satisfies `∇²u + k²u = 0` in the domain, `u = −u^i` on
the scatterer and an absorbing condition on the outer boundary. With linear
shape functions the weak form gives `F = K − k²M + B`, with the stiffness
matrix `K`, the mass matrix `M` and the absorbing boundary matrix `B`. The
scatterer nodes are eliminated, their known values being moved to the
right-hand side.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
import scipy.sparse

from ..linalg import (
    ComplexArray,
    SparseMatrixOracle,
    write_matrix_market,
    write_vector,
)
from ..qsim import VectorOracle
from ._elements import degrees_of_freedom, element_matrices
from ._exceptions import MeshError
from ._far_field import far_field_vector
from ._mesh import BoundaryTag, Mesh
from ._problem import AbsorbingBoundary, ScatteringProblem
from ._rcs import CrossSectionKind, classical_rcs

_logger = logging.getLogger(__name__)

_EDGE_MASS = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
_EDGE_STIFFNESS = np.array([[1.0, -1.0], [-1.0, 1.0]])


def _absorbing_coefficients(
    problem: ScatteringProblem, radius: npt.NDArray[np.float64]
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]:
    """Get `α` and `β` of `∂u/∂n = −αu + β ∂²u/∂φ²` on circles of given radius."""
    k = problem.wavenumber
    alpha = np.full(radius.shape, 1j * k, dtype=np.complex128)
    beta = np.zeros(radius.shape, dtype=np.complex128)
    if problem.boundary is AbsorbingBoundary.CURVATURE:
        alpha = alpha + 1.0 / (2.0 * radius)
    elif problem.boundary is AbsorbingBoundary.SECOND_ORDER:
        denominator = 1.0 + 1j * k * radius
        alpha = alpha + 1.0 / (2.0 * radius) - 1.0 / (8.0 * radius * denominator)
        beta = 1.0 / (2.0 * radius * denominator)
    return alpha, beta


def _boundary_triplets(
    mesh: Mesh, problem: ScatteringProblem
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], ComplexArray]:
    facets = mesh.facets(BoundaryTag.OUTER)
    if mesh.dimension == 1:
        nodes = facets[:, 0]
        values = np.full(len(nodes), 1j * problem.wavenumber)
        return nodes, nodes, values
    ends = mesh.nodes[facets]
    lengths = np.linalg.norm(ends[:, 1] - ends[:, 0], axis=1)
    radius = mesh.radii[facets].mean(axis=1)
    alpha, beta = _absorbing_coefficients(problem, radius)
    # −∮∂u/∂n v = α∮uv + βρ²∮u_s v_s after integrating the arc derivative by parts.
    local = (alpha * lengths)[:, None, None] * _EDGE_MASS + (
        beta * radius**2 / lengths
    )[:, None, None] * _EDGE_STIFFNESS
    rows = np.repeat(facets, 2, axis=1)
    cols = np.tile(facets, (1, 2))
    return rows.reshape(-1), cols.reshape(-1), local.reshape(-1)


def _sum_triplets(
    rows: npt.NDArray[np.int64],
    cols: npt.NDArray[np.int64],
    values: ComplexArray,
    size: int,
) -> scipy.sparse.csr_matrix:
    """Sum duplicate entries in input order, unlike the sorting sparse formats."""
    keys, slots = np.unique(rows * size + cols, return_inverse=True)
    sums = np.bincount(slots, weights=values.real, minlength=len(keys)) + 1j * (
        np.bincount(slots, weights=values.imag, minlength=len(keys))
    )
    return scipy.sparse.csr_matrix(
        (sums, (keys // size, keys % size)), shape=(size, size)
    )


def system_matrix(mesh: Mesh, problem: ScatteringProblem) -> scipy.sparse.csr_matrix:
    """Assemble `F = K − k²M + B` over all nodes, scatterer nodes included.

    Every element contributes one symmetric local matrix and contributions are
    summed in element order, so the result is exactly symmetric.

    Args:
        mesh: the mesh.
        problem: the wave parameters.

    Returns:
        The matrix.

    Raises:
        ValueError: if the problem and mesh dimensions differ.
    """
    if problem.dimension != mesh.dimension:
        raise ValueError(
            f"{problem.dimension}-D problem on a {mesh.dimension}-D mesh"
        )
    stiffness, mass = element_matrices(mesh)
    local = stiffness - problem.wavenumber**2 * mass
    size = mesh.dimension + 1
    rows = np.repeat(mesh.elements, size, axis=1).reshape(-1)
    cols = np.tile(mesh.elements, (1, size)).reshape(-1)
    boundary_rows, boundary_cols, boundary_values = _boundary_triplets(mesh, problem)
    return _sum_triplets(
        np.concatenate([rows, boundary_rows]),
        np.concatenate([cols, boundary_cols]),
        np.concatenate([local.reshape(-1).astype(np.complex128), boundary_values]),
        mesh.node_count,
    )


def scatterer_values(mesh: Mesh, problem: ScatteringProblem) -> ComplexArray:
    """Get the prescribed scattered field `−u^i` on the scatterer nodes.

    Args:
        mesh: the mesh.
        problem: the wave parameters.

    Returns:
        The values, in the order of `mesh.boundary_nodes(SCATTERER)`.

    Raises:
        MeshError: if the mesh has no scatterer boundary.
    """
    scatterer = mesh.boundary_nodes(BoundaryTag.SCATTERER)
    if len(scatterer) == 0:
        raise MeshError("the mesh has no scatterer boundary")
    return -problem.incident_field(mesh.nodes[scatterer])


def incident_rhs(mesh: Mesh, problem: ScatteringProblem) -> ComplexArray:
    """Get the right-hand side lifting the scatterer boundary values.

    Args:
        mesh: the mesh.
        problem: the wave parameters.

    Returns:
        `b = −F_fs·g`, with `g = −u^i` on the scatterer nodes `s` and `f` the
            free nodes.

    Raises:
        MeshError: if the mesh has no scatterer boundary.
    """
    free = degrees_of_freedom(mesh)
    scatterer = mesh.boundary_nodes(BoundaryTag.SCATTERER)
    coupling = system_matrix(mesh, problem)[free][:, scatterer]
    return np.asarray(-(coupling @ scatterer_values(mesh, problem)))


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """The discrete scattering problem `F x = b` and its far-field readout."""

    matrix: SparseMatrixOracle
    """The complex symmetric system matrix `F` over the free nodes."""

    rhs: ComplexArray
    """The right-hand side `b`."""

    far_field: ComplexArray
    """The far-field vector `R`; the far field of `x` is `R·x`."""

    dof_nodes: npt.NDArray[np.int64]
    """The mesh node of every unknown."""

    mesh: Mesh
    """The mesh the system was assembled on."""

    problem: ScatteringProblem
    """The wave parameters."""

    @property
    def dim(self) -> int:
        """The number of unknowns."""
        return self.matrix.dim

    @property
    def kind(self) -> CrossSectionKind:
        """The cross section this system reports."""
        if self.mesh.dimension == 1:
            return CrossSectionKind.RADAR_CROSS_SECTION
        return CrossSectionKind.ECHO_WIDTH

    def b_oracle(self) -> VectorOracle:
        """Get the oracle of `b` with scale `C_b = 1/max|b_j|`.

        Returns:
            The oracle.
        """
        return VectorOracle.from_vector(self.rhs)

    def r_oracle(self) -> VectorOracle:
        """Get the oracle of `conj(R)` with scale `C_r = 1/max|R_j|`.

        The conjugate makes the inner product `⟨conj(R)|x⟩` equal `R·x`.

        Returns:
            The oracle.
        """
        return VectorOracle.from_vector(np.conj(self.far_field))

    @property
    def rhs_scale(self) -> float:
        """The scale `C_b`."""
        return self.b_oracle().scale

    @property
    def far_field_scale(self) -> float:
        """The scale `C_r`."""
        return self.r_oracle().scale

    def cross_section(self, solution: npt.ArrayLike) -> float:
        """Get the cross section of a solution of this system.

        Args:
            solution: the scattered field on the free nodes.

        Returns:
            The echo width in 2-D, `|R·x|²/4π` in 1-D.
        """
        return classical_rcs(
            self.far_field,
            solution,
            kind=self.kind,
            wavenumber=self.problem.wavenumber,
        )

    def nodal_field(self, solution: npt.ArrayLike) -> ComplexArray:
        """Get the scattered field on every node.

        Args:
            solution: the scattered field on the free nodes.

        Returns:
            The field, with the prescribed values on the scatterer.
        """
        field = np.zeros(self.mesh.node_count, dtype=np.complex128)
        field[self.dof_nodes] = np.asarray(solution, dtype=np.complex128)
        scatterer = self.mesh.boundary_nodes(BoundaryTag.SCATTERER)
        field[scatterer] = scatterer_values(self.mesh, self.problem)
        return field

    def export(self, path: str | Path) -> tuple[Path, Path, Path]:
        """Write `F`, `b` and `R` for cross-checking with other tools.

        `F` goes to `<path>.mtx` in Matrix Market format, `b` and `R` to
        `<path>.rhs.txt` and `<path>.far.txt`.

        Args:
            path: the path prefix.

        Returns:
            The three written paths.
        """
        prefix = Path(path)
        paths = (
            prefix.with_name(prefix.name + ".mtx"),
            prefix.with_name(prefix.name + ".rhs.txt"),
            prefix.with_name(prefix.name + ".far.txt"),
        )
        write_matrix_market(paths[0], self.matrix)
        write_vector(paths[1], self.rhs)
        write_vector(paths[2], self.far_field)
        return paths


def assemble_system(mesh: Mesh, problem: ScatteringProblem) -> AssembledSystem:
    """Assemble the matrix, right-hand side and far-field vector.

    Args:
        mesh: the mesh.
        problem: the wave parameters.

    Returns:
        The system over the free nodes.
    """
    free = degrees_of_freedom(mesh)
    full = system_matrix(mesh, problem)
    system = AssembledSystem(
        matrix=SparseMatrixOracle(full[free][:, free]),
        rhs=incident_rhs(mesh, problem),
        far_field=far_field_vector(mesh, problem),
        dof_nodes=free,
        mesh=mesh,
        problem=problem,
    )
    _logger.debug(
        "assembled %d-D system with %d unknowns and sparsity %d",
        mesh.dimension,
        system.dim,
        system.matrix.sparsity,
    )
    return system
