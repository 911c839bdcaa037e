# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Internal math tools."""

import math
from collections.abc import Sequence

import numpy as np


def is_close_to_zero(value: complex, abs_tol: float = 1e-12) -> bool:
    """Check if a real or complex value is close to zero.

    Args:
        value: the value to check.
        abs_tol: the absolute tolerance applied to the magnitude of `value`.

    Returns:
        whether the magnitude of the value is within `abs_tol` of zero.
    """
    return math.isclose(abs(value), 0.0, abs_tol=abs_tol)


def next_power_of_two(value: int) -> int:
    """Get the exponent of the smallest power of two not below `value`.

    Args:
        value: a positive integer.

    Returns:
        The smallest `n` such that `2**n >= value`.

    Raises:
        ValueError: if `value` is not positive.
    """
    if value < 1:
        raise ValueError(f"value ({value}) must be positive")
    return (value - 1).bit_length()


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Fit a straight line through `(log x, log y)` and return its slope.

    Used to check scaling laws such as the condition number growth of FEM
    matrices or the convergence order of product formulas.

    Args:
        xs: the abscissas, all positive.
        ys: the ordinates, all positive.

    Returns:
        The least-squares slope of `log(ys)` against `log(xs)`.

    Raises:
        ValueError: if fewer than two points are given or a value is not
            positive.
    """
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError(
            f"need at least two paired points, got {len(xs)} and {len(ys)}"
        )
    x_arr = np.asarray(xs, dtype=np.float64)
    y_arr = np.asarray(ys, dtype=np.float64)
    if np.any(x_arr <= 0.0) or np.any(y_arr <= 0.0):
        raise ValueError("log-log fits need strictly positive values")
    slope, _intercept = np.polyfit(np.log(x_arr), np.log(y_arr), deg=1)
    return float(slope)
