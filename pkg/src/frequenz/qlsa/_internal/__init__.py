# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Utility types and functions for internal use."""

from ._math import fit_loglog_slope, is_close_to_zero, next_power_of_two

# Explicitly declare the public API.
__all__ = ["fit_loglog_slope", "is_close_to_zero", "next_power_of_two"]
