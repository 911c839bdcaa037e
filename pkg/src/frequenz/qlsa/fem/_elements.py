# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Linear shape functions on segments and triangles."""

import numpy as np
import numpy.typing as npt

from ._exceptions import MeshError
from ._mesh import BoundaryTag, Mesh


def shape_gradients(mesh: Mesh) -> npt.NDArray[np.float64]:
    """Get the constant gradients of the linear shape functions.

    Args:
        mesh: the mesh.

    Returns:
        An array of shape `(elements, dimension + 1, dimension)`.
    """
    if mesh.dimension == 1:
        inverse = 1.0 / mesh.measures
        return np.stack([-inverse, inverse], axis=1)[:, :, None]
    corners = mesh.nodes[mesh.elements]
    x = corners[:, :, 0]
    y = corners[:, :, 1]
    twice_area = 2.0 * mesh.measures[:, None]
    following = [1, 2, 0]
    previous = [2, 0, 1]
    return np.stack(
        [
            (y[:, following] - y[:, previous]) / twice_area,
            (x[:, previous] - x[:, following]) / twice_area,
        ],
        axis=-1,
    )


def element_matrices(
    mesh: Mesh,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Get the element stiffness and mass matrices.

    Args:
        mesh: the mesh.

    Returns:
        The stiffness and mass matrices, each of shape
            `(elements, dimension + 1, dimension + 1)`.
    """
    measures = mesh.measures[:, None, None]
    gradients = shape_gradients(mesh)
    stiffness = measures * np.einsum("eid,ejd->eij", gradients, gradients)
    size = mesh.dimension + 1
    # ∫φ_iφ_j is |e|/6·(1 + δ_ij) on segments and |e|/12·(1 + δ_ij) on triangles.
    denominator = 6.0 if mesh.dimension == 1 else 12.0
    mass = measures * (np.ones((size, size)) + np.eye(size)) / denominator
    return stiffness, mass


def degrees_of_freedom(mesh: Mesh) -> npt.NDArray[np.int64]:
    """Get the nodes that carry unknowns, in unknown order.

    Args:
        mesh: the mesh.

    Returns:
        The indices of all nodes not on the scatterer.

    Raises:
        MeshError: if the mesh has no scatterer boundary.
    """
    scatterer = mesh.boundary_nodes(BoundaryTag.SCATTERER)
    if len(scatterer) == 0:
        raise MeshError("the mesh has no scatterer boundary")
    free = np.ones(mesh.node_count, dtype=bool)
    free[scatterer] = False
    return np.flatnonzero(free)
