# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Scattering cross sections from classical solutions and solver readouts."""

import enum
import logging
import math

import numpy as np
import numpy.typing as npt

from ..linalg import ContractViolationError
from ..qsim import PipelineAmplitudes
from ._exceptions import DegeneratePipelineError

_logger = logging.getLogger(__name__)


class CrossSectionKind(enum.Enum):
    """How a far field `R·x` is turned into a cross section."""

    RADAR_CROSS_SECTION = "rcs"
    """`|R·x|²/4π`."""

    ECHO_WIDTH = "echo_width"
    """The 2-D cross section per unit length `|R·x|²/4k`."""


def cross_section_prefactor(
    kind: CrossSectionKind, wavenumber: float | None = None
) -> float:
    """Get the factor in front of `|R·x|²`.

    Args:
        kind: the cross section.
        wavenumber: the wavenumber `k`, needed for the echo width.

    Returns:
        The factor.

    Raises:
        ValueError: if the echo width is asked for without a positive `k`.
    """
    if kind is CrossSectionKind.RADAR_CROSS_SECTION:
        return 1.0 / (4.0 * math.pi)
    if wavenumber is None or wavenumber <= 0.0:
        raise ValueError("the echo width needs a positive wavenumber")
    return 1.0 / (4.0 * wavenumber)


def classical_rcs(
    far_field: npt.ArrayLike,
    solution: npt.ArrayLike,
    *,
    kind: CrossSectionKind = CrossSectionKind.RADAR_CROSS_SECTION,
    wavenumber: float | None = None,
) -> float:
    """Get the cross section of a classical solution.

    Args:
        far_field: the far-field vector `R`.
        solution: the solution `x`.
        kind: the cross section.
        wavenumber: the wavenumber, for the echo width.

    Returns:
        The prefactor times `|R·x|²`, without conjugation.

    Raises:
        ContractViolationError: if the dimensions differ.
    """
    weights = np.asarray(far_field, dtype=np.complex128)
    values = np.asarray(solution, dtype=np.complex128)
    if weights.shape != values.shape:
        raise ContractViolationError(
            f"far field {weights.shape} and solution {values.shape} differ"
        )
    far_field_value = complex(np.sum(weights * values))
    return cross_section_prefactor(kind, wavenumber) * abs(far_field_value) ** 2


def _unit_factor(
    amplitudes: PipelineAmplitudes,
    dimension: int | None,
    rhs_scale: float,
    far_field_scale: float,
) -> float:
    size = amplitudes.dimension if dimension is None else dimension
    if amplitudes.sin2_phi_x <= 0.0:
        raise DegeneratePipelineError("the solution branch has probability 0")
    if rhs_scale <= 0.0 or far_field_scale <= 0.0:
        raise ValueError("the oracle scales must be positive")
    # ‖b‖² = N·s_b/C_b², ‖R‖² = N·s_r/C_r² and ‖x‖² = ‖b‖²·s_x/C² turn
    # |⟨R|x⟩|² = ΔP/(s_b·s_x·s_r) into |R·x|² = N²·ΔP/(C_b²·C_r²·C²).
    return float(
        size**2
        / (rhs_scale * far_field_scale * amplitudes.inversion_constant) ** 2
    )


def quantum_rcs(  # pylint: disable=too-many-arguments
    amplitudes: PipelineAmplitudes,
    dimension: int | None,
    rhs_scale: float,
    far_field_scale: float,
    *,
    kind: CrossSectionKind = CrossSectionKind.RADAR_CROSS_SECTION,
    wavenumber: float | None = None,
) -> float:
    """Get the cross section from the readout probabilities of the solver.

    Args:
        amplitudes: the readout probabilities.
        dimension: the register dimension `N` the vectors were prepared over,
            `None` for the one stored in `amplitudes`.
        rhs_scale: the scale `C_b` of the right-hand side oracle.
        far_field_scale: the scale `C_r` of the far-field oracle.
        kind: the cross section.
        wavenumber: the wavenumber, for the echo width.

    Returns:
        The cross section in the units of `classical_rcs`.

    Raises:
        DegeneratePipelineError: if `sin²φ_x` vanishes.
        ValueError: if a scale is not positive.
    """
    factor = _unit_factor(amplitudes, dimension, rhs_scale, far_field_scale)
    difference = amplitudes.p_1110 - amplitudes.p_1111
    if difference < 0.0:
        _logger.debug("negative swap test difference %g clipped to 0", difference)
        difference = 0.0
    return cross_section_prefactor(kind, wavenumber) * factor * difference


def quantum_rcs_error(  # pylint: disable=too-many-arguments
    amplitudes: PipelineAmplitudes,
    dimension: int | None,
    rhs_scale: float,
    far_field_scale: float,
    *,
    kind: CrossSectionKind = CrossSectionKind.RADAR_CROSS_SECTION,
    wavenumber: float | None = None,
) -> float:
    """Propagate the estimation error bounds to the cross section.

    Args:
        amplitudes: the readout probabilities.
        dimension: the register dimension, `None` for the stored one.
        rhs_scale: the scale `C_b`.
        far_field_scale: the scale `C_r`.
        kind: the cross section.
        wavenumber: the wavenumber, for the echo width.

    Returns:
        The error bound, 0 for exact probabilities.

    Raises:
        DegeneratePipelineError: if `sin²φ_x` vanishes.
        ValueError: if a scale is not positive.
    """
    factor = _unit_factor(amplitudes, dimension, rhs_scale, far_field_scale)
    if not amplitudes.estimated:
        return 0.0
    spread = (amplitudes.p_1110_error or 0.0) + (amplitudes.p_1111_error or 0.0)
    return cross_section_prefactor(kind, wavenumber) * factor * spread
