# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Human readable reports of an output directory."""

import logging
from pathlib import Path

# pylint not finding this is a false positive
from pydantic import ValidationError  # pylint: disable=no-name-in-module

from ._exceptions import ConfigError
from ._records import COLUMNS, ResultRecord, format_cell, read_records

_logger = logging.getLogger(__name__)

_ALWAYS_HIDDEN = frozenset({"experiment", "seed", "wall_time"})


def _render_table(experiment: str, records: list[ResultRecord]) -> str:
    rows = [record.dict() for record in records]
    columns = [
        column
        for column in COLUMNS
        if column not in _ALWAYS_HIDDEN
        and any(row[column] is not None for row in rows)
    ]
    cells = [[format_cell(row[column]) for column in columns] for row in rows]
    widths = [
        max([len(column)] + [len(line[i]) for line in cells])
        for i, column in enumerate(columns)
    ]
    lines = [
        f"== {experiment} ({len(records)} records, seed {records[0].seed})",
        "  ".join(column.ljust(width) for column, width in zip(columns, widths)),
        "  ".join("-" * width for width in widths),
    ]
    lines.extend(
        "  ".join(cell.rjust(width) for cell, width in zip(line, widths))
        for line in cells
    )
    return "\n".join(lines)


def render_report(directory: str | Path) -> str:
    """Render every record file of an output directory as text tables.

    Columns that are empty for every record of a file are left out.

    Args:
        directory: the output directory.

    Returns:
        One table per `.json` record file, in file name order.

    Raises:
        ConfigError: if the directory holds no readable record file.
    """
    output = Path(directory)
    tables: list[str] = []
    for path in sorted(output.glob("*.json")):
        try:
            records = read_records(path)
        except (OSError, RuntimeError, ValidationError) as err:
            _logger.warning("skipping %s: %s", path, err)
            continue
        if records:
            tables.append(_render_table(path.stem, records))
    if not tables:
        raise ConfigError(f"no record files in {output}")
    return "\n\n".join(tables) + "\n"
