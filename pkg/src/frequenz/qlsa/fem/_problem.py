# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Wave parameters of a scattering problem.

Fields use the time convention `e^{+jωt}`: outgoing waves behave like
`e^{−jkr}` and the incident plane wave is `A·e^{−jk d·r}` for the propagation
direction `d`. In 2-D the field is the scalar `E_z` of a TMz wave, so the
polarization is implicit.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..linalg import ComplexArray

_UNIT_TOLERANCE = 1e-12


class AbsorbingBoundary(enum.Enum):
    """The local absorbing condition imposed on the outer circle.

    In 1-D every variant reduces to the exact condition `∂u/∂n = −jk u`.
    """

    FIRST_ORDER = "first_order"
    """`∂u/∂n = −jk u`, the default."""

    CURVATURE = "curvature"
    """`∂u/∂n = −(jk + 1/2ρ) u`, exact for the leading term of the outgoing
    expansion."""

    SECOND_ORDER = "second_order"
    """The second order Bayliss-Turkel condition, with a tangential second
    derivative term."""


@dataclass(frozen=True)
class Slab:
    """A perfectly conducting wall at `x = 0` in front of free space."""

    length: float
    """The length of the computational domain."""


@dataclass(frozen=True)
class Circle:
    """A perfectly conducting circular cylinder centred at the origin."""

    radius: float
    """The cylinder radius."""


Geometry = Slab | Circle
"""The scatterer geometries with known reference solutions."""


def _unit(vector: tuple[float, ...], name: str) -> None:
    norm = math.sqrt(sum(value * value for value in vector))
    if len(vector) not in (1, 2) or abs(norm - 1.0) > _UNIT_TOLERANCE:
        raise ValueError(f"{name} {vector} must be a 1-D or 2-D unit vector")


@dataclass(frozen=True)
class ScatteringProblem:
    """An incident plane wave and an observation direction."""

    wavenumber: float
    """The wavenumber `k`, in radians per length unit."""

    direction: tuple[float, ...]
    """The unit propagation direction `d` of the incident wave."""

    observation: tuple[float, ...]
    """The unit observation direction `ŝ` of the far field."""

    amplitude: complex = 1.0
    """The incident amplitude `A`; 0 switches the excitation off."""

    boundary: AbsorbingBoundary = AbsorbingBoundary.FIRST_ORDER
    """The absorbing condition on the outer boundary."""

    geometry: Geometry | None = None
    """The scatterer, when a reference solution is wanted."""

    def __post_init__(self) -> None:
        """Check the parameters.

        Raises:
            ValueError: if `k` is not positive or a direction is not a unit
                vector of the problem dimension.
        """
        if not self.wavenumber > 0.0:
            raise ValueError(f"wavenumber ({self.wavenumber}) must be positive")
        _unit(self.direction, "direction")
        _unit(self.observation, "observation")
        if len(self.direction) != len(self.observation):
            raise ValueError("direction and observation dimensions differ")

    @classmethod
    def slab(
        cls, wavenumber: float, length: float, amplitude: complex = 1.0
    ) -> ScatteringProblem:
        """Create the problem of a wave hitting a wall at `x = 0` from the right.

        Args:
            wavenumber: the wavenumber `k`.
            length: the length of the computational domain.
            amplitude: the incident amplitude.

        Returns:
            The problem, observing the reflected wave.
        """
        return cls(
            wavenumber=wavenumber,
            direction=(-1.0,),
            observation=(1.0,),
            amplitude=amplitude,
            geometry=Slab(length),
        )

    @classmethod
    def circle(  # pylint: disable=too-many-arguments
        cls,
        wavenumber: float,
        radius: float,
        *,
        incidence: float = 0.0,
        observation: float = math.pi,
        boundary: AbsorbingBoundary = AbsorbingBoundary.FIRST_ORDER,
    ) -> ScatteringProblem:
        """Create the problem of a wave hitting a circular cylinder.

        Args:
            wavenumber: the wavenumber `k`.
            radius: the cylinder radius.
            incidence: the angle of the propagation direction.
            observation: the angle of the observation direction, by default
                the backscatter direction.
            boundary: the absorbing condition.

        Returns:
            The problem.
        """
        return cls(
            wavenumber=wavenumber,
            direction=(math.cos(incidence), math.sin(incidence)),
            observation=(math.cos(observation), math.sin(observation)),
            boundary=boundary,
            geometry=Circle(radius),
        )

    @property
    def dimension(self) -> int:
        """The spatial dimension."""
        return len(self.direction)

    @property
    def scattering_angle(self) -> float:
        """The angle between the propagation and observation directions."""
        cosine = float(np.dot(self.direction, self.observation))
        return math.acos(min(1.0, max(-1.0, cosine)))

    def incident_field(self, points: npt.ArrayLike) -> ComplexArray:
        """Evaluate the incident wave `A·e^{−jk d·r}`.

        Args:
            points: the points, one row per point.

        Returns:
            The field values.
        """
        phase = np.asarray(points, dtype=np.float64) @ np.asarray(self.direction)
        return self.amplitude * np.exp(-1j * self.wavenumber * phase)

    def far_field_kernel(self, points: npt.ArrayLike) -> ComplexArray:
        """Evaluate the far-field kernel `W = e^{+jk ŝ·r}`.

        Args:
            points: the points, one row per point.

        Returns:
            The kernel values.
        """
        phase = np.asarray(points, dtype=np.float64) @ np.asarray(self.observation)
        return np.exp(1j * self.wavenumber * phase)
