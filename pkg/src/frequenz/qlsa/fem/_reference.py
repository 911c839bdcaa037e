# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Closed-form cross sections the finite-element results are checked against."""

import logging
import math

import scipy.special

from ._exceptions import UnsupportedGeometryError
from ._problem import Circle, ScatteringProblem, Slab

_logger = logging.getLogger(__name__)

SERIES_TOLERANCE = 1e-10
"""Relative size of the last term at which the cylinder series stops."""

MAX_SERIES_TERMS = 500
"""Largest number of terms summed by the adaptive cylinder series."""


def _series_term(order: int, ka: float, angle: float) -> complex:
    neumann = 1.0 if order == 0 else 2.0
    ratio = scipy.special.jv(order, ka) / scipy.special.hankel2(order, ka)
    return complex(neumann * ratio * math.cos(order * angle))


def bessel_series(ka: float, angle: float, terms: int) -> complex:
    """Sum the first terms of the conducting cylinder series.

    Args:
        ka: the wavenumber times the cylinder radius.
        angle: the angle between the propagation and observation directions.
        terms: the number of terms, 0 giving an empty sum.

    Returns:
        `Σₙ εₙ Jₙ(ka)/Hₙ⁽²⁾(ka) cos(nφ)` for `n < terms`, with `ε₀ = 1` and
            `εₙ = 2` otherwise.

    Raises:
        ValueError: if `ka` is not positive or `terms` is negative.
    """
    if ka <= 0.0:
        raise ValueError(f"ka ({ka}) must be positive")
    if terms < 0:
        raise ValueError(f"terms ({terms}) must not be negative")
    return sum((_series_term(n, ka, angle) for n in range(terms)), 0j)


def cylinder_echo_width(
    wavenumber: float, radius: float, angle: float
) -> float:
    """Get the echo width of a perfectly conducting cylinder under TMz incidence.

    Terms are added until, past the order `ka`, the last one falls below
    `SERIES_TOLERANCE` times the partial sum.

    Args:
        wavenumber: the wavenumber `k`.
        radius: the cylinder radius `a`.
        angle: the angle between the propagation and observation directions.

    Returns:
        `(4/k)·|Σₙ εₙ Jₙ(ka)/Hₙ⁽²⁾(ka) cos(nφ)|²`.

    Raises:
        ValueError: if `k` or `a` is not positive.
    """
    if wavenumber <= 0.0 or radius <= 0.0:
        raise ValueError(
            f"wavenumber ({wavenumber}) and radius ({radius}) must be positive"
        )
    ka = wavenumber * radius
    total = 0j
    for order in range(MAX_SERIES_TERMS):
        term = _series_term(order, ka, angle)
        total += term
        if order > ka and abs(term) < SERIES_TOLERANCE * abs(total):
            _logger.debug("cylinder series converged after %d terms", order + 1)
            break
    else:
        _logger.warning(
            "cylinder series not converged after %d terms", MAX_SERIES_TERMS
        )
    return 4.0 / wavenumber * abs(total) ** 2


def reference_solution(problem: ScatteringProblem) -> float:
    """Get the closed-form value the discrete cross section approximates.

    Args:
        problem: the problem, with its geometry set.

    Returns:
        The reflection magnitude 1 for the conducting wall, the echo width in
            the observation direction for the cylinder.

    Raises:
        UnsupportedGeometryError: if the problem has no known geometry.
    """
    geometry = problem.geometry
    if isinstance(geometry, Slab):
        return 1.0
    if isinstance(geometry, Circle):
        return cylinder_echo_width(
            problem.wavenumber, geometry.radius, problem.scattering_angle
        )
    raise UnsupportedGeometryError(f"no reference solution for {geometry!r}")
