# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for result records and their files."""

import json
import pathlib

import pytest

# pylint: disable = no-name-in-module
from pydantic import ValidationError

from frequenz.qlsa.harness import (
    SCHEMA_VERSION,
    ConfigError,
    ResultRecord,
    format_table,
    read_records,
    render_report,
    write_records,
)


@pytest.fixture()
def records() -> list[ResultRecord]:
    """Create two records of a size sweep."""
    return [
        ResultRecord(
            experiment="sweep",
            command="solve",
            seed=1,
            dimension=size,
            sparsity=3,
            parameter="size",
            value=size,
            converged=True,
            iterations=size // 2,
            kappa=0.4 * size**2,
            wall_time=0.01 * size,
        )
        for size in (8, 16)
    ]


class TestResultRecord:
    """Tests for `ResultRecord` validation."""

    def test_not_finite(self) -> None:
        """Every number must be finite."""
        with pytest.raises(ValidationError):
            ResultRecord(
                experiment="x",
                command="spai",
                seed=0,
                dimension=2,
                sparsity=1,
                kappa=float("inf"),
            )

    def test_unknown_field(self) -> None:
        """Unknown fields are rejected."""
        with pytest.raises(ValidationError):
            ResultRecord(
                experiment="x",
                command="spai",
                seed=0,
                dimension=2,
                sparsity=1,
                colour="red",
            )

    def test_deterministic(self, records: list[ResultRecord]) -> None:
        """The wall time is not part of the reproducible fields."""
        slower = records[0].copy(update={"wall_time": 10.0})
        assert slower.deterministic() == records[0].deterministic()
        assert "wall_time" not in slower.deterministic()


class TestRecordFiles:
    """Tests for writing and reading record files."""

    def test_write_read(
        self, records: list[ResultRecord], tmp_path: pathlib.Path
    ) -> None:
        """Records read back as written, and the table has one row each."""
        json_path, tsv_path = write_records(tmp_path / "out", "sweep", records)
        assert json_path == tmp_path / "out" / "sweep.json"
        assert read_records(json_path) == records
        lines = tsv_path.read_text().splitlines()
        assert len(lines) == 3
        header = lines[0].split("\t")
        row = dict(zip(header, lines[2].split("\t")))
        assert row["dimension"] == "16"
        assert row["converged"] == "true"
        assert row["kappa"] == "102.4"
        assert row["fidelity"] == ""

    def test_unknown_version(
        self, records: list[ResultRecord], tmp_path: pathlib.Path
    ) -> None:
        """Files of another schema version are refused."""
        json_path, _ = write_records(
            tmp_path, "sweep", records, schema_version=SCHEMA_VERSION + 1
        )
        assert json.loads(json_path.read_text())["schema_version"] == 2
        with pytest.raises(RuntimeError, match="Unknown schema version"):
            read_records(json_path)

    def test_table_header(self) -> None:
        """An empty table has a header only."""
        header = format_table([]).splitlines()
        assert len(header) == 1
        assert header[0].startswith("experiment\tcommand\tseed\tdimension")


class TestReport:
    """Tests for `render_report`."""

    def test_render(self, records: list[ResultRecord], tmp_path: pathlib.Path) -> None:
        """Empty columns are dropped and every record gets a line."""
        write_records(tmp_path, "sweep", records)
        report = render_report(tmp_path)
        lines = report.splitlines()
        assert lines[0] == "== sweep (2 records, seed 1)"
        assert "kappa" in lines[1]
        assert "fidelity" not in lines[1]
        assert "wall_time" not in lines[1]
        assert len(lines) == 4

    def test_empty(self, tmp_path: pathlib.Path) -> None:
        """A directory without records cannot be reported."""
        with pytest.raises(ConfigError):
            render_report(tmp_path)
