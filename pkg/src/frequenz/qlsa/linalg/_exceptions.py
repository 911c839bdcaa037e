# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Linear algebra exceptions."""


class LinalgError(Exception):
    """Base class for the errors raised by the linear algebra layer."""


class SingularMatrixError(LinalgError):
    """A matrix is singular, or too close to singular for double precision."""


class ContractViolationError(LinalgError, ValueError):
    """An input does not satisfy the precondition of an operation."""
