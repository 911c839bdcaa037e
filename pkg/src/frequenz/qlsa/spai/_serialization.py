# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Preconditioner dumping & loading functions.

A preconditioner is stored as two files sharing a base path: `<base>.mtx`
holds `M` in Matrix Market format and `<base>.json` the metadata sidecar.
"""

from pathlib import Path

import numpy as np
from pydantic import BaseModel, Extra, validator

from ..linalg import read_matrix_market, write_matrix_market
from ._pattern import Side
from ._preconditioner import Preconditioner

# Version of the latest sidecar format
FILE_FORMAT_VERSION: int = 1


class _Sidecar(BaseModel):
    """Metadata stored next to the matrix of a preconditioner."""

    format_version: int
    level: int
    side: Side
    eps_pre: float
    residuals: list[float]
    rank_deficient: list[int] = []

    class Config:
        """Reject unknown fields."""

        extra = Extra.forbid

    @validator("level")
    @classmethod
    def _check_level(cls, value: int) -> int:
        if value not in (0, 1, 2):
            raise ValueError(f"pattern level ({value}) must be 0, 1 or 2")
        return value


def _paths(path: str | Path) -> tuple[Path, Path]:
    base = Path(path)
    if base.suffix in (".mtx", ".json"):
        base = base.with_suffix("")
    return base.with_suffix(".mtx"), base.with_suffix(".json")


def save_preconditioner(  # noqa: DOC502 (OSError is raised indirectly)
    path: str | Path,
    precond: Preconditioner,
    file_format_version: int = FILE_FORMAT_VERSION,
) -> None:
    """Dump a preconditioner to disk.

    Args:
        path: the base path; `.mtx` and `.json` suffixes are added.
        precond: the preconditioner to dump.
        file_format_version: version of the sidecar format, optional.

    Raises:
        OSError: when the files cannot be written.
    """
    matrix_path, sidecar_path = _paths(path)
    write_matrix_market(
        matrix_path,
        precond.matrix,
        comment=f"SPAI {precond.side.value} level {precond.level}",
    )
    sidecar = _Sidecar(
        format_version=file_format_version,
        level=precond.level,
        side=precond.side,
        eps_pre=precond.eps_pre,
        residuals=precond.residuals.tolist(),
        rank_deficient=list(precond.rank_deficient),
    )
    sidecar_path.write_text(sidecar.json(indent=2))


def load_preconditioner(path: str | Path) -> Preconditioner:
    """Load a preconditioner from disk.

    Args:
        path: the base path the preconditioner was saved with.

    Returns:
        The preconditioner.

    Raises:
        RuntimeError: when the file format version is unknown.
        ValueError: when the matrix and the sidecar disagree.
    """
    matrix_path, sidecar_path = _paths(path)
    sidecar = _Sidecar.parse_raw(sidecar_path.read_text())
    if sidecar.format_version != FILE_FORMAT_VERSION:
        raise RuntimeError(
            f"Unknown file format version: {sidecar.format_version}. "
            f"Can load: {FILE_FORMAT_VERSION}"
        )
    matrix = read_matrix_market(matrix_path)
    if len(sidecar.residuals) != matrix.dim:
        raise ValueError(
            f"sidecar has {len(sidecar.residuals)} residuals for a "
            f"{matrix.dim}-dimensional matrix"
        )
    precond = Preconditioner(
        matrix=matrix,
        residuals=np.asarray(sidecar.residuals, dtype=np.float64),
        side=sidecar.side,
        level=sidecar.level,
        rank_deficient=tuple(sidecar.rank_deficient),
    )
    if not np.isclose(precond.eps_pre, sidecar.eps_pre, rtol=1e-12, atol=0.0):
        raise ValueError(
            f"sidecar eps_pre {sidecar.eps_pre} does not match the residuals"
        )
    return precond
