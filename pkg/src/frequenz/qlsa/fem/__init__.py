# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Finite-element scattering front-end.

Scattering of a plane wave by a perfectly conducting wall (1-D) or cylinder
(2-D) is discretized with linear elements into a sparse system `F x = b`, and
the far field of the solution is read out as `R·x`. The cross section follows
either from a classical solution or from the readout probabilities of the
quantum solver, and is checked against closed-form references.
"""

from ._assembly import (
    AssembledSystem,
    assemble_system,
    incident_rhs,
    scatterer_values,
    system_matrix,
)
from ._elements import degrees_of_freedom, element_matrices, shape_gradients
from ._exceptions import (
    DegeneratePipelineError,
    FemError,
    MeshError,
    UnsupportedGeometryError,
)
from ._far_field import cutoff, far_field_vector
from ._mesh import (
    BoundaryTag,
    Mesh,
    circle_mesh,
    format_mesh,
    parse_mesh,
    read_mesh,
    slab_mesh,
    write_mesh,
)
from ._problem import (
    AbsorbingBoundary,
    Circle,
    Geometry,
    ScatteringProblem,
    Slab,
)
from ._rcs import (
    CrossSectionKind,
    classical_rcs,
    cross_section_prefactor,
    quantum_rcs,
    quantum_rcs_error,
)
from ._reference import bessel_series, cylinder_echo_width, reference_solution

__all__ = [
    "AbsorbingBoundary",
    "AssembledSystem",
    "BoundaryTag",
    "Circle",
    "CrossSectionKind",
    "DegeneratePipelineError",
    "FemError",
    "Geometry",
    "Mesh",
    "MeshError",
    "ScatteringProblem",
    "Slab",
    "UnsupportedGeometryError",
    "assemble_system",
    "bessel_series",
    "circle_mesh",
    "classical_rcs",
    "cross_section_prefactor",
    "cutoff",
    "cylinder_echo_width",
    "degrees_of_freedom",
    "element_matrices",
    "far_field_vector",
    "format_mesh",
    "incident_rhs",
    "parse_mesh",
    "quantum_rcs",
    "quantum_rcs_error",
    "read_mesh",
    "reference_solution",
    "scatterer_values",
    "shape_gradients",
    "slab_mesh",
    "system_matrix",
    "write_mesh",
]
