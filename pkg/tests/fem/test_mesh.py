# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for meshes and the mesh file format."""

import math
from pathlib import Path

import numpy as np
import pytest

from frequenz.qlsa.fem import (
    BoundaryTag,
    Mesh,
    MeshError,
    circle_mesh,
    format_mesh,
    parse_mesh,
    read_mesh,
    slab_mesh,
    write_mesh,
)

_SQUARE = """\
# unit square
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
3 0   # closing edge
"""


class TestMesh:
    """Tests for `Mesh` validation."""

    @pytest.fixture()
    def square(self) -> Mesh:
        """Create the two-triangle unit square."""
        return parse_mesh(_SQUARE)

    def test_square(self, square: Mesh) -> None:
        """The square parses into two triangles of area 1/2."""
        assert square.dimension == 2
        assert square.node_count == 4
        np.testing.assert_allclose(square.measures, [0.5, 0.5])
        np.testing.assert_array_equal(
            square.boundary_nodes(BoundaryTag.SCATTERER), [0, 1, 2]
        )

    def test_degenerate(self) -> None:
        """Zero area elements are rejected."""
        with pytest.raises(MeshError, match="degenerate"):
            Mesh(
                nodes=np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
                elements=np.array([[0, 1, 2]]),
                boundaries={BoundaryTag.OUTER: np.array([[0, 1], [1, 2], [2, 0]])},
            )

    def test_clockwise(self) -> None:
        """Elements must be counter-clockwise."""
        with pytest.raises(MeshError, match="counter-clockwise"):
            Mesh(
                nodes=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
                elements=np.array([[0, 2, 1]]),
                boundaries={BoundaryTag.OUTER: np.array([[0, 1], [1, 2], [2, 0]])},
            )

    @pytest.mark.parametrize(
        "boundaries, message",
        [
            ({BoundaryTag.OUTER: [[0, 1], [1, 2]]}, "no tag"),
            (
                {
                    BoundaryTag.OUTER: [[0, 1], [1, 2], [2, 0]],
                    BoundaryTag.SCATTERER: [[1, 0]],
                },
                "more than once",
            ),
            ({BoundaryTag.OUTER: [[0, 1], [1, 2], [2, 0], [0, 3]]}, "not on"),
        ],
    )
    def test_tags(
        self, boundaries: dict[BoundaryTag, list[list[int]]], message: str
    ) -> None:
        """Every boundary facet is tagged exactly once."""
        with pytest.raises(MeshError, match=message):
            Mesh(
                nodes=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
                elements=np.array([[0, 1, 2]]),
                boundaries={tag: np.array(rows) for tag, rows in boundaries.items()},
            )

    def test_not_conforming(self) -> None:
        """Three triangles cannot share an edge."""
        with pytest.raises(MeshError, match="conforming"):
            Mesh(
                nodes=np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, 2.0]]),
                elements=np.array([[0, 1, 2], [0, 1, 3], [0, 1, 2]]),
                boundaries={},
            )

    def test_index_out_of_range(self) -> None:
        """Element indices must point at nodes."""
        with pytest.raises(MeshError, match="out of range"):
            Mesh(nodes=np.array([0.0, 1.0]), elements=np.array([[0, 2]]), boundaries={})


class TestGenerators:
    """Tests for the built-in mesh generators."""

    def test_slab(self) -> None:
        """The slab has its scatterer at 0 and its absorbing end at `L`."""
        mesh = slab_mesh(2.0, 8)
        assert mesh.dimension == 1
        np.testing.assert_allclose(mesh.measures, 0.25)
        np.testing.assert_array_equal(mesh.boundary_nodes(BoundaryTag.SCATTERER), [0])
        np.testing.assert_array_equal(mesh.boundary_nodes(BoundaryTag.OUTER), [8])

    def test_circle(self) -> None:
        """The annulus has rings of nodes and positive triangles."""
        mesh = circle_mesh(1.0, 3.0, 4, 12)
        assert mesh.node_count == 5 * 12
        assert mesh.element_count == 2 * 4 * 12
        assert np.all(mesh.measures > 0.0)
        np.testing.assert_allclose(
            mesh.radii[mesh.boundary_nodes(BoundaryTag.SCATTERER)], 1.0
        )
        np.testing.assert_allclose(
            mesh.radii[mesh.boundary_nodes(BoundaryTag.OUTER)], 3.0
        )
        # The polygon area approaches the annulus area from below.
        annulus = math.pi * (3.0**2 - 1.0**2)
        polygon = 0.5 * 12 * math.sin(2 * math.pi / 12) * (3.0**2 - 1.0**2)
        assert mesh.measures.sum() == pytest.approx(polygon)
        assert polygon < annulus

    @pytest.mark.parametrize(
        "args", [(1.0, 1.0, 2, 8), (0.0, 1.0, 2, 8), (1.0, 2.0, 0, 8), (1.0, 2.0, 2, 2)]
    )
    def test_circle_invalid(self, args: tuple[float, float, int, int]) -> None:
        """Invalid radii and cell counts are rejected."""
        with pytest.raises(ValueError):
            circle_mesh(*args)

    def test_slab_invalid(self) -> None:
        """Slabs need a positive length and element count."""
        with pytest.raises(ValueError):
            slab_mesh(0.0, 4)
        with pytest.raises(ValueError):
            slab_mesh(1.0, 0)


class TestMeshFile:
    """Tests for reading and writing mesh files."""

    def test_write_read(self, tmp_path: Path) -> None:
        """A written mesh reads back unchanged."""
        mesh = circle_mesh(0.5, 2.0, 3, 9)
        write_mesh(tmp_path / "annulus.mesh", mesh)
        loaded = read_mesh(tmp_path / "annulus.mesh")
        np.testing.assert_array_equal(loaded.nodes, mesh.nodes)
        np.testing.assert_array_equal(loaded.elements, mesh.elements)
        for tag in BoundaryTag:
            np.testing.assert_array_equal(loaded.facets(tag), mesh.facets(tag))

    def test_format_slab(self) -> None:
        """1-D meshes have single-node facets."""
        text = format_mesh(slab_mesh(1.0, 2))
        assert text.splitlines()[:2] == ["$Dimension 1", "$Nodes 3"]
        assert "$Boundary SCATTERER 1\n0\n" in text

    @pytest.mark.parametrize(
        "text, message",
        [
            ("$Nodes 1\n0.0\n", "must come first"),
            ("$Dimension 3\n", "unsupported dimension"),
            ("$Dimension 1\n$Nodes 2\n0.0\n", "ends inside"),
            ("$Dimension 1\n$Nodes 2\n0.0 1.0\n1.0\n", "expected 1"),
            ("$Dimension 1\n$Nodes x\n", "invalid count"),
            ("$Dimension 1\n$Boundary WALL 0\n", "unknown tag"),
            (
                "$Dimension 1\n$Nodes 2\n0.0\nabc\n$Elements 1\n0 1\n",
                "invalid number",
            ),
            ("$Dimension 1\n$Nodes 2\n0.0\n1.0\n", "needs"),
            ("$Dimension 1\n$Mystery\n", "unexpected"),
        ],
    )
    def test_malformed(self, text: str, message: str) -> None:
        """Malformed files raise `MeshError` with the reason."""
        with pytest.raises(MeshError, match=message):
            parse_mesh(text)
