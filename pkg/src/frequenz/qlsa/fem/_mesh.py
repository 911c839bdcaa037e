# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Simplicial meshes of the computational domain.

Meshes are either 1-D (segments) or 2-D (triangles). Boundary facets (nodes in
1-D, edges in 2-D) carry one of two tags: `SCATTERER` for the perfectly
conducting surface and `OUTER` for the absorbing boundary.

Meshes are read from and written to a plain text format:

```text
# comments start with '#'
$Dimension 2
$Nodes 4
0.0 0.0
1.0 0.0
1.0 1.0
0.0 1.0
$Elements 2
0 1 2
0 2 3
$Boundary SCATTERER 2
0 1
1 2
$Boundary OUTER 2
2 3
3 0
```

Node lines hold the coordinates, element lines the 0-based node indices in
counter-clockwise order and boundary lines the facet node indices.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import enum
import logging
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from ._exceptions import MeshError

_logger = logging.getLogger(__name__)

_MEASURE_TOLERANCE = 1e-12
"""Elements smaller than this fraction of the domain extent are degenerate."""


class BoundaryTag(enum.Enum):
    """The kind of boundary a facet belongs to."""

    SCATTERER = "SCATTERER"
    """The perfectly conducting scatterer surface."""

    OUTER = "OUTER"
    """The absorbing outer boundary."""


def _facet_keys(mesh_facets: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    return np.sort(mesh_facets, axis=1)


@dataclass(frozen=True, eq=False)
class Mesh:
    """A conforming simplicial mesh with tagged boundary facets."""

    nodes: npt.NDArray[np.float64]
    """The node coordinates, one row per node."""

    elements: npt.NDArray[np.int64]
    """The element node indices, one row of `dimension + 1` per element."""

    boundaries: Mapping[BoundaryTag, npt.NDArray[np.int64]]
    """The boundary facets per tag, one row of `dimension` nodes per facet."""

    def __post_init__(self) -> None:
        """Normalize the arrays and check the mesh.

        Raises:
            MeshError: if shapes or indices are invalid, an element has
                non-positive measure, the mesh is not conforming or the
                boundary facets are not tagged exactly once.
        """
        nodes = np.array(self.nodes, dtype=np.float64)
        if nodes.ndim == 1:
            nodes = nodes.reshape(-1, 1)
        if nodes.ndim != 2 or nodes.shape[1] not in (1, 2) or len(nodes) < 2:
            raise MeshError(f"invalid node array of shape {nodes.shape}")
        dimension = nodes.shape[1]
        elements = np.array(self.elements, dtype=np.int64, ndmin=2)
        if elements.ndim != 2 or elements.shape[1] != dimension + 1:
            raise MeshError(
                f"{dimension}-D elements need {dimension + 1} nodes, "
                f"got shape {elements.shape}"
            )
        if len(elements) == 0:
            raise MeshError("a mesh needs at least one element")
        if elements.min() < 0 or elements.max() >= len(nodes):
            raise MeshError("element node index out of range")
        boundaries = {
            BoundaryTag(tag): np.array(facets, dtype=np.int64, ndmin=2).reshape(
                -1, dimension
            )
            for tag, facets in self.boundaries.items()
        }
        for array in (nodes, elements, *boundaries.values()):
            array.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "boundaries", boundaries)
        self._check_measures()
        self._check_boundary()

    def _check_measures(self) -> None:
        extent = float(np.ptp(self.nodes, axis=0).max())
        measures = self.measures
        scale = extent**self.dimension
        degenerate = np.flatnonzero(np.abs(measures) <= _MEASURE_TOLERANCE * scale)
        if len(degenerate):
            raise MeshError(f"degenerate element {int(degenerate[0])}")
        inverted = np.flatnonzero(measures < 0.0)
        if len(inverted):
            raise MeshError(f"element {int(inverted[0])} is not counter-clockwise")

    def _mesh_facets(self) -> npt.NDArray[np.int64]:
        if self.dimension == 1:
            return self.elements.reshape(-1, 1)
        first, second, third = self.elements.T
        return np.concatenate(
            [
                np.stack([first, second], axis=1),
                np.stack([second, third], axis=1),
                np.stack([third, first], axis=1),
            ]
        )

    def _check_boundary(self) -> None:
        keys, counts = np.unique(
            _facet_keys(self._mesh_facets()), axis=0, return_counts=True
        )
        if np.any(counts > 2):
            raise MeshError("mesh is not conforming: a facet has more than 2 elements")
        open_facets = {tuple(key) for key in keys[counts == 1].tolist()}
        tagged: dict[tuple[int, ...], BoundaryTag] = {}
        for tag, facets in self.boundaries.items():
            for key in _facet_keys(facets).tolist():
                facet = tuple(key)
                if facet in tagged:
                    raise MeshError(f"facet {facet} is tagged more than once")
                if facet not in open_facets:
                    raise MeshError(f"tagged facet {facet} is not on the boundary")
                tagged[facet] = tag
        untagged = open_facets - tagged.keys()
        if untagged:
            raise MeshError(f"boundary facet {min(untagged)} has no tag")

    @property
    def dimension(self) -> int:
        """The spatial dimension, 1 or 2."""
        return int(self.nodes.shape[1])

    @property
    def node_count(self) -> int:
        """The number of nodes."""
        return len(self.nodes)

    @property
    def element_count(self) -> int:
        """The number of elements."""
        return len(self.elements)

    @property
    def measures(self) -> npt.NDArray[np.float64]:
        """The signed element lengths or areas."""
        corners = self.nodes[self.elements]
        if self.dimension == 1:
            return np.asarray(corners[:, 1, 0] - corners[:, 0, 0])
        edge1 = corners[:, 1] - corners[:, 0]
        edge2 = corners[:, 2] - corners[:, 0]
        return np.asarray(
            0.5 * (edge1[:, 0] * edge2[:, 1] - edge1[:, 1] * edge2[:, 0])
        )

    @property
    def radii(self) -> npt.NDArray[np.float64]:
        """The distance of every node from the origin."""
        return np.asarray(np.linalg.norm(self.nodes, axis=1))

    def facets(self, tag: BoundaryTag) -> npt.NDArray[np.int64]:
        """Get the boundary facets with a tag.

        Args:
            tag: the boundary tag.

        Returns:
            The facets, empty if the tag is not used.
        """
        empty = np.zeros((0, self.dimension), dtype=np.int64)
        return self.boundaries.get(tag, empty)

    def boundary_nodes(self, tag: BoundaryTag) -> npt.NDArray[np.int64]:
        """Get the sorted nodes on the boundary facets with a tag.

        Args:
            tag: the boundary tag.

        Returns:
            The node indices.
        """
        return np.unique(self.facets(tag))


def slab_mesh(length: float, elements: int) -> Mesh:
    """Create a uniform 1-D mesh of `[0, length]`.

    The node at `x = 0` is the scatterer, the node at `x = length` the
    absorbing boundary.

    Args:
        length: the slab length.
        elements: the number of segments.

    Returns:
        The mesh.

    Raises:
        ValueError: if the length or the element count is not positive.
    """
    if length <= 0.0:
        raise ValueError(f"length ({length}) must be positive")
    if elements < 1:
        raise ValueError(f"elements ({elements}) must be positive")
    nodes = np.linspace(0.0, length, elements + 1).reshape(-1, 1)
    segments = np.stack([np.arange(elements), np.arange(1, elements + 1)], axis=1)
    return Mesh(
        nodes=nodes,
        elements=segments,
        boundaries={
            BoundaryTag.SCATTERER: np.array([[0]]),
            BoundaryTag.OUTER: np.array([[elements]]),
        },
    )


def circle_mesh(
    radius: float, outer_radius: float, radial: int, angular: int
) -> Mesh:
    """Create a structured mesh of the annulus around a circular scatterer.

    Nodes sit on `radial + 1` rings and `angular` rays. Each polar cell is split
    into two counter-clockwise triangles.

    Args:
        radius: the scatterer radius.
        outer_radius: the radius of the absorbing boundary.
        radial: the number of cells between the two circles.
        angular: the number of cells around the circles.

    Returns:
        The mesh.

    Raises:
        ValueError: if the radii are not increasing and positive, or the cell
            counts are too small.
    """
    if not 0.0 < radius < outer_radius:
        raise ValueError(
            f"radii must satisfy 0 < radius ({radius}) < outer ({outer_radius})"
        )
    if radial < 1 or angular < 3:
        raise ValueError(
            f"need radial >= 1 and angular >= 3, got {radial} and {angular}"
        )
    radii = np.linspace(radius, outer_radius, radial + 1)
    angles = 2.0 * math.pi * np.arange(angular) / angular
    nodes = np.stack(
        [
            np.outer(radii, np.cos(angles)).reshape(-1),
            np.outer(radii, np.sin(angles)).reshape(-1),
        ],
        axis=1,
    )
    ring = np.arange(radial)[:, None]
    ray = np.arange(angular)[None, :]
    inner = ring * angular + ray
    inner_next = ring * angular + (ray + 1) % angular
    outer = inner + angular
    outer_next = inner_next + angular
    triangles = np.concatenate(
        [
            np.stack([inner, outer, outer_next], axis=-1).reshape(-1, 3),
            np.stack([inner, outer_next, inner_next], axis=-1).reshape(-1, 3),
        ]
    )
    rays = np.arange(angular)
    last = radial * angular
    return Mesh(
        nodes=nodes,
        elements=triangles,
        boundaries={
            BoundaryTag.SCATTERER: np.stack([rays, (rays + 1) % angular], axis=1),
            BoundaryTag.OUTER: np.stack(
                [last + rays, last + (rays + 1) % angular], axis=1
            ),
        },
    )


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].split()
        if content:
            yield number, content


def _section(
    lines: Iterator[tuple[int, list[str]]], count: int, width: int, what: str
) -> list[list[str]]:
    rows = []
    for _ in range(count):
        try:
            number, fields = next(lines)
        except StopIteration as err:
            raise MeshError(f"file ends inside the {what} section") from err
        if len(fields) != width:
            raise MeshError(
                f"line {number}: expected {width} {what} fields, got {len(fields)}"
            )
        rows.append(fields)
    return rows


def _count(number: int, value: str) -> int:
    try:
        count = int(value)
    except ValueError as err:
        raise MeshError(f"line {number}: invalid count {value!r}") from err
    if count < 0:
        raise MeshError(f"line {number}: negative count {count}")
    return count


def parse_mesh(text: str) -> Mesh:
    """Parse a mesh from its text form.

    Args:
        text: the file contents.

    Returns:
        The mesh.

    Raises:
        MeshError: if the text is malformed or describes an invalid mesh.
    """
    lines = _lines(text)
    dimension: int | None = None
    nodes: list[list[str]] | None = None
    elements: list[list[str]] | None = None
    boundaries: dict[BoundaryTag, list[list[str]]] = {}
    for number, fields in lines:
        keyword = fields[0]
        if keyword == "$Dimension" and len(fields) == 2:
            dimension = _count(number, fields[1])
            if dimension not in (1, 2):
                raise MeshError(f"line {number}: unsupported dimension {dimension}")
        elif dimension is None:
            raise MeshError(f"line {number}: $Dimension must come first")
        elif keyword == "$Nodes" and len(fields) == 2:
            nodes = _section(lines, _count(number, fields[1]), dimension, "node")
        elif keyword == "$Elements" and len(fields) == 2:
            elements = _section(
                lines, _count(number, fields[1]), dimension + 1, "element"
            )
        elif keyword == "$Boundary" and len(fields) == 3:
            try:
                tag = BoundaryTag(fields[1])
            except ValueError as err:
                raise MeshError(f"line {number}: unknown tag {fields[1]!r}") from err
            if tag in boundaries:
                raise MeshError(f"line {number}: repeated {tag.value} section")
            boundaries[tag] = _section(
                lines, _count(number, fields[2]), dimension, "facet"
            )
        else:
            raise MeshError(f"line {number}: unexpected {' '.join(fields)!r}")
    if dimension is None or nodes is None or elements is None:
        raise MeshError("a mesh needs $Dimension, $Nodes and $Elements sections")
    try:
        return Mesh(
            nodes=np.array(nodes, dtype=np.float64).reshape(-1, dimension),
            elements=np.array(elements, dtype=np.int64).reshape(-1, dimension + 1),
            boundaries={
                tag: np.array(rows, dtype=np.int64).reshape(-1, dimension)
                for tag, rows in boundaries.items()
            },
        )
    except ValueError as err:
        raise MeshError(f"invalid number in mesh: {err}") from err


def read_mesh(path: str | Path) -> Mesh:
    """Read a mesh file.

    Args:
        path: the file to read.

    Returns:
        The mesh.

    Raises:
        MeshError: if the file does not describe a valid mesh.
        OSError: if the file cannot be read.
    """
    mesh = parse_mesh(Path(path).read_text(encoding="utf-8"))
    _logger.debug(
        "read %d-D mesh with %d nodes from %s", mesh.dimension, mesh.node_count, path
    )
    return mesh


def format_mesh(mesh: Mesh) -> str:
    """Render a mesh in its text form.

    Args:
        mesh: the mesh.

    Returns:
        The text, which `parse_mesh` reads back.
    """
    lines = [f"$Dimension {mesh.dimension}", f"$Nodes {mesh.node_count}"]
    lines.extend(" ".join(repr(float(value)) for value in row) for row in mesh.nodes)
    lines.append(f"$Elements {mesh.element_count}")
    lines.extend(" ".join(str(int(i)) for i in row) for row in mesh.elements)
    for tag in BoundaryTag:
        facets = mesh.facets(tag)
        if len(facets) == 0:
            continue
        lines.append(f"$Boundary {tag.value} {len(facets)}")
        lines.extend(" ".join(str(int(i)) for i in row) for row in facets)
    return "\n".join(lines) + "\n"


def write_mesh(  # noqa: DOC502 (OSError is raised indirectly by write_text)
    path: str | Path, mesh: Mesh
) -> None:
    """Write a mesh file.

    Args:
        path: the file to write.
        mesh: the mesh.

    Raises:
        OSError: if the file cannot be written.
    """
    Path(path).write_text(format_mesh(mesh), encoding="utf-8")
