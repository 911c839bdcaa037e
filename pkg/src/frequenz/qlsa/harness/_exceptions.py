# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Exceptions raised by the experiment harness."""


class HarnessError(Exception):
    """Base class for all harness errors."""


class ConfigError(HarnessError):
    """A run configuration could not be read or is invalid."""


class NumericalFailure(HarnessError):
    """A run failed numerically, by degeneracy or a singular system."""
