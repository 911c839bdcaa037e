# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Numerical constants shared between the subpackages."""

DENSE_DIMENSION_CAP: int = 4096
"""Largest dimension for which dense factorizations are attempted.

Every quantum result is checked against a dense classical solve, so this also
bounds the size of the systems the simulator accepts.
"""

SINGULARITY_THRESHOLD: float = 1e-12
"""Relative singular value threshold below which a matrix is considered singular.

A matrix is singular when `sigma_min < SINGULARITY_THRESHOLD * sigma_max`.
"""

HERMITIAN_TOLERANCE: float = 1e-12
"""Relative tolerance used when checking whether a matrix is Hermitian."""

NORM_TOLERANCE: float = 1e-10
"""Allowed deviation of a state norm from one after a unitary stage."""

DEFAULT_QUBIT_CAP: int = 26
"""Default maximum number of qubits a simulated state may span."""

STATE_DUMP_DIMENSION_CAP: int = 256
"""Largest system register dimension for which full-state dumps are allowed."""
