# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""The far-field vector `R`, with the far field of a solution `x` being `R·x`.

In 2-D the far field in direction `ŝ` is the contour integral
`I = ∮(u ∂W/∂n − W ∂u/∂n)` around the scatterer, with the kernel
`W = e^{jk ŝ·r}`. A cut-off function `χ`, 1 next to the scatterer and 0 next
to the outer boundary, turns it into the area integral
`I = ∫∇χ·(W∇u − u∇W)`, which only needs the nodal values of `u`.

In 1-D the readout is the reflection coefficient `r = u(L)·e^{jkL}` of the
scattered wave `r·e^{−jkx}`.
"""

import numpy as np
import numpy.typing as npt

from ..linalg import ComplexArray
from ._elements import degrees_of_freedom, shape_gradients
from ._exceptions import MeshError
from ._mesh import BoundaryTag, Mesh
from ._problem import ScatteringProblem

# Symmetric 6-point rule, exact for polynomials of degree 4 on triangles.
_QUADRATURE_POINTS = np.array(
    [
        [0.108103018168070, 0.445948490915965, 0.445948490915965],
        [0.445948490915965, 0.108103018168070, 0.445948490915965],
        [0.445948490915965, 0.445948490915965, 0.108103018168070],
        [0.816847572980459, 0.091576213509771, 0.091576213509771],
        [0.091576213509771, 0.816847572980459, 0.091576213509771],
        [0.091576213509771, 0.091576213509771, 0.816847572980459],
    ]
)
_QUADRATURE_WEIGHTS = np.array([0.223381589678011] * 3 + [0.109951743655322] * 3)


def _touching(mesh: Mesh, tag: BoundaryTag) -> npt.NDArray[np.bool_]:
    on_boundary = np.zeros(mesh.node_count, dtype=bool)
    on_boundary[mesh.boundary_nodes(tag)] = True
    return np.asarray(on_boundary[mesh.elements].any(axis=1))


def cutoff(mesh: Mesh) -> npt.NDArray[np.float64]:
    """Get the nodal values of the radial cut-off `χ`.

    `χ` is 1 up to the outermost radius of the elements touching the scatterer,
    0 from the innermost radius of the elements touching the outer boundary
    and linear in the radius in between. Its gradient vanishes on every
    element touching either boundary.

    Args:
        mesh: the 2-D mesh.

    Returns:
        The nodal values.

    Raises:
        MeshError: if the two layers overlap, leaving no room for `χ` to drop.
    """
    radii = mesh.radii
    inner = float(radii[mesh.elements[_touching(mesh, BoundaryTag.SCATTERER)]].max())
    outer = float(radii[mesh.elements[_touching(mesh, BoundaryTag.OUTER)]].min())
    if not inner < outer:
        raise MeshError(
            f"no room for the far-field layer between radii {inner} and {outer}"
        )
    return np.asarray(np.clip((outer - radii) / (outer - inner), 0.0, 1.0))


def _far_field_2d(mesh: Mesh, problem: ScatteringProblem) -> ComplexArray:
    gradients = shape_gradients(mesh)
    chi = cutoff(mesh)[mesh.elements]
    chi_gradient = np.einsum("ei,eid->ed", chi, gradients)
    points = np.einsum("qi,eid->eqd", _QUADRATURE_POINTS, mesh.nodes[mesh.elements])
    kernel = problem.far_field_kernel(points.reshape(-1, 2)).reshape(points.shape[:2])
    weighted = kernel * _QUADRATURE_WEIGHTS
    # ∫∇χ·(W∇φ_i − φ_i∇W) with ∇W = jk ŝ W.
    gradient_term = np.einsum("ed,eid->ei", chi_gradient, gradients) * weighted.sum(
        axis=1
    )[:, None]
    kernel_term = (
        1j
        * problem.wavenumber
        * (chi_gradient @ np.asarray(problem.observation))[:, None]
        * (weighted @ _QUADRATURE_POINTS)
    )
    local = mesh.measures[:, None] * (gradient_term - kernel_term)
    nodal = np.zeros(mesh.node_count, dtype=np.complex128)
    np.add.at(nodal, mesh.elements, local)
    return nodal


def _reflection_1d(mesh: Mesh, problem: ScatteringProblem) -> ComplexArray:
    nodal = np.zeros(mesh.node_count, dtype=np.complex128)
    end = mesh.boundary_nodes(BoundaryTag.OUTER)
    if len(end) != 1:
        raise MeshError(f"a 1-D mesh needs one absorbing end, got {len(end)}")
    position = float(mesh.nodes[end[0], 0])
    nodal[end[0]] = np.exp(1j * problem.wavenumber * position)
    return nodal


def far_field_vector(mesh: Mesh, problem: ScatteringProblem) -> ComplexArray:
    """Get the far-field vector over the free nodes.

    Entries on the scatterer nodes are zero by construction of `χ`, so
    dropping them loses nothing.

    Args:
        mesh: the mesh.
        problem: the wave parameters.

    Returns:
        `R`, with `R·x` the far field of the scattered field `x`: the contour
            integral `I` in 2-D, the reflection coefficient in 1-D.

    Raises:
        ValueError: if the problem and mesh dimensions differ.
    """
    if problem.dimension != mesh.dimension:
        raise ValueError(
            f"{problem.dimension}-D problem on a {mesh.dimension}-D mesh"
        )
    if mesh.dimension == 1:
        nodal = _reflection_1d(mesh, problem)
    else:
        nodal = _far_field_2d(mesh, problem)
    return nodal[degrees_of_freedom(mesh)]
