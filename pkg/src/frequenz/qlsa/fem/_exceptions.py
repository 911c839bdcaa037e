# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Scattering front-end exceptions."""


class FemError(Exception):
    """Base class for the errors raised by the scattering front-end."""


class MeshError(FemError):
    """A mesh is degenerate, non-conforming or badly tagged."""


class DegeneratePipelineError(FemError):
    """The solver outputs cannot be turned into a cross section."""


class UnsupportedGeometryError(FemError):
    """No reference solution is known for a geometry."""
