# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Matrix Market and plain-text vector input and output."""

import logging
from pathlib import Path

import numpy as np
import numpy.typing as npt
import scipy.io
import scipy.sparse

from ._oracle import ComplexArray, SparseMatrixOracle

_logger = logging.getLogger(__name__)


def read_matrix_market(path: str | Path) -> SparseMatrixOracle:
    """Read a square matrix in Matrix Market coordinate format.

    Real, complex, general, symmetric and Hermitian files are accepted.

    Args:
        path: the file to read.

    Returns:
        The matrix oracle.
    """
    matrix = scipy.io.mmread(str(path))
    oracle = SparseMatrixOracle(scipy.sparse.csr_matrix(matrix))
    _logger.debug("read %s from %s", oracle, path)
    return oracle


def write_matrix_market(  # noqa: DOC502 (OSError is raised indirectly by mmwrite)
    path: str | Path, matrix: SparseMatrixOracle, comment: str = ""
) -> None:
    """Write a matrix in Matrix Market coordinate format.

    Args:
        path: the file to write.
        matrix: the matrix to write.
        comment: an optional comment for the file header.

    Raises:
        OSError: when the file cannot be written.
    """
    scipy.io.mmwrite(str(path), matrix.to_csr().tocoo(), comment=comment)


def read_vector(path: str | Path) -> ComplexArray:
    """Read a vector stored one value per line.

    Every non-empty line not starting with `#` holds either a real value or a
    real and an imaginary part separated by whitespace.

    Args:
        path: the file to read.

    Returns:
        The vector.

    Raises:
        ValueError: if a line holds more than two values or is not numeric.
    """
    values: list[complex] = []
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) > 2:
            raise ValueError(f"{path}:{number}: expected 're' or 're im', got {line!r}")
        try:
            real = float(parts[0])
            imag = float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError as err:
            raise ValueError(f"{path}:{number}: {err}") from err
        values.append(complex(real, imag))
    return np.asarray(values, dtype=np.complex128)


def write_vector(  # noqa: DOC502 (OSError is raised indirectly by write_text)
    path: str | Path, vector: npt.ArrayLike
) -> None:
    """Write a vector one value per line as `re im`.

    Args:
        path: the file to write.
        vector: the vector.

    Raises:
        OSError: when the file cannot be written.
    """
    values = np.asarray(vector, dtype=np.complex128)
    lines = [f"{value.real!r} {value.imag!r}" for value in values.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")
