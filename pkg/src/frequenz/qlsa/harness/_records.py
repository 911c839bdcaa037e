# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Result records and their files.

Every run writes two files to the output directory: `<experiment>.json`
with the versioned list of records and `<experiment>.tsv`, the same data as a
tab separated table.
"""

import logging
import math
from pathlib import Path
from typing import Any

# pylint not finding these is a false positive
from pydantic import BaseModel, Extra, validator  # pylint: disable=no-name-in-module

_logger = logging.getLogger(__name__)

# Version of the latest record schema
SCHEMA_VERSION: int = 1


class ResultRecord(BaseModel):
    """The outcome of one experiment point.

    Fields that do not apply to a command are `None`. Everything except
    `wall_time` is a deterministic function of the configuration.
    """

    experiment: str
    command: str
    seed: int
    dimension: int
    sparsity: int
    parameter: str | None = None
    value: int | None = None

    converged: bool | None = None
    iterations: int | None = None
    residual_norm: float | None = None
    solution_error: float | None = None
    iterations_preconditioned: int | None = None

    kappa: float | None = None
    kappa_preconditioned: float | None = None
    level: int | None = None
    eps_pre: float | None = None
    bound_applicable: bool | None = None
    spectral_bound: float | None = None

    fidelity: float | None = None
    clock_leakage: float | None = None
    trotter_error: float | None = None
    sin2_phi_b: float | None = None
    sin2_phi_x: float | None = None
    sin2_phi_r: float | None = None
    p_1110: float | None = None
    p_1111: float | None = None
    sin2_phi_b_error: float | None = None
    sin2_phi_x_error: float | None = None
    sin2_phi_r_error: float | None = None
    p_1110_error: float | None = None
    p_1111_error: float | None = None
    overlap: float | None = None
    overlap_dense: float | None = None

    cross_section_kind: str | None = None
    rcs_classical: float | None = None
    rcs_quantum: float | None = None
    rcs_quantum_error: float | None = None
    rcs_reference: float | None = None

    oracle_queries: int | None = None
    exponentials: int | None = None
    exponential_bound: float | None = None
    grover_iterations: int | None = None
    term_count: int | None = None

    wall_time: float = 0.0

    class Config:
        """Reject unknown fields."""

        extra = Extra.forbid

    @validator("*")
    @classmethod
    def _check_finite(cls, value: Any) -> Any:
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"value ({value}) must be finite")
        return value

    def deterministic(self) -> dict[str, Any]:
        """Get the fields that identical runs reproduce exactly.

        Returns:
            Every field but `wall_time`.
        """
        return self.dict(exclude={"wall_time"})


class _RecordFile(BaseModel):
    """The content of a `.json` record file."""

    schema_version: int
    experiment: str
    records: list[ResultRecord]

    class Config:
        """Reject unknown fields."""

        extra = Extra.forbid


COLUMNS: tuple[str, ...] = tuple(ResultRecord.__fields__)
"""The columns of the table files, in field order."""


def format_cell(value: Any) -> str:
    """Format a record value for a table cell, `None` as the empty string."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def format_table(records: list[ResultRecord]) -> str:
    """Format records as a tab separated table with a header line.

    Args:
        records: the records, in row order.

    Returns:
        The table, empty cells standing for `None`.
    """
    lines = ["\t".join(COLUMNS)]
    for record in records:
        values = record.dict()
        lines.append("\t".join(format_cell(values[column]) for column in COLUMNS))
    return "\n".join(lines) + "\n"


def write_records(  # noqa: DOC502 (OSError is raised indirectly by write_text)
    directory: str | Path,
    experiment: str,
    records: list[ResultRecord],
    schema_version: int = SCHEMA_VERSION,
) -> tuple[Path, Path]:
    """Write the record and table files of an experiment.

    Args:
        directory: the output directory, created if missing.
        experiment: the experiment name, used as file name stem.
        records: the records, in config order.
        schema_version: version of the record schema, optional.

    Returns:
        The paths of the `.json` and `.tsv` files.

    Raises:
        OSError: when the files cannot be written.
    """
    output = Path(directory)
    output.mkdir(parents=True, exist_ok=True)
    json_path = output / f"{experiment}.json"
    tsv_path = output / f"{experiment}.tsv"
    content = _RecordFile(
        schema_version=schema_version, experiment=experiment, records=records
    )
    json_path.write_text(content.json(indent=2))
    tsv_path.write_text(format_table(records))
    _logger.info("wrote %d records to %s and %s", len(records), json_path, tsv_path)
    return json_path, tsv_path


def read_records(path: str | Path) -> list[ResultRecord]:
    """Read a `.json` record file.

    Args:
        path: the file.

    Returns:
        The records.

    Raises:
        RuntimeError: when the schema version is unknown.
    """
    content = _RecordFile.parse_raw(Path(path).read_text())
    if content.schema_version != SCHEMA_VERSION:
        raise RuntimeError(
            f"Unknown schema version: {content.schema_version}. "
            f"Can load: {SCHEMA_VERSION}"
        )
    return content.records
