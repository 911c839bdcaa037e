# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Tests for run configurations."""

import pathlib
from typing import Any

import pytest

from frequenz.qlsa.fem import AbsorbingBoundary
from frequenz.qlsa.harness import (
    ConfigError,
    MatrixSource,
    RunConfig,
    SweepParameter,
    load_config,
    parse_config,
)
from frequenz.qlsa.qsim import Backend
from frequenz.qlsa.spai import Side


def _raw(**sections: Any) -> dict[str, Any]:
    raw: dict[str, Any] = {
        "experiment": "test",
        "seed": 3,
        "matrix": {"source": "identity", "size": 4},
    }
    raw.update(sections)
    return raw


class TestParseConfig:
    """Tests for `parse_config`."""

    def test_defaults(self) -> None:
        """Missing sections take their defaults."""
        config = parse_config(_raw())
        assert config.matrix.source is MatrixSource.IDENTITY
        assert config.spai is None
        assert config.sweep is None
        assert config.qlsa.t0 == "kappa"
        assert config.qlsa.inversion_constant == "grid"
        assert config.qlsa.backend is Backend.EXACT
        assert config.matrix.boundary is AbsorbingBoundary.FIRST_ORDER
        assert config.output.directory == pathlib.Path("results")

    def test_sections(self) -> None:
        """Enums and numbers are converted."""
        config = parse_config(
            _raw(
                spai={"level": 2, "side": "right"},
                qlsa={"t0": 8, "backend": "trotter", "trotter_steps": 4},
            )
        )
        assert config.spai is not None
        assert config.spai.side is Side.RIGHT
        assert config.qlsa.t0 == 8.0
        assert config.qlsa.backend is Backend.TROTTER

    @pytest.mark.parametrize(
        "raw",
        [
            {"experiment": "test", "matrix": {"source": "identity"}},
            _raw(matrix={"source": "identity", "colour": "red"}),
            _raw(matrix={"source": "banded"}),
            _raw(matrix={"source": "file"}),
            _raw(matrix={"source": "diagonal", "eigenvalues": [1.0, 0.0]}),
            _raw(matrix={"source": "fem_circle", "radius": 2.0, "outer_radius": 1.0}),
            _raw(matrix={"source": "identity", "size": 0}),
            _raw(experiment="a/b"),
            _raw(seed=-1),
            _raw(spai={"level": 3}),
            _raw(qlsa={"clock_qubits": 0}),
            _raw(qlsa={"t0": -1.0}),
            _raw(qlsa={"t0": "fast"}),
            _raw(qlsa={"trotter_order": 3}),
            _raw(qlsa={"bits": 0}),
            _raw(cg={"tol": 0.0}),
            _raw(sweep={"parameter": "size", "values": []}),
            _raw(sweep={"parameter": "level", "values": [1, 2]}),
            _raw(qlsa={"on_grid": True, "t0": 8.0}),
            _raw(
                matrix={"source": "random_hermitian", "size": 4},
                qlsa={"on_grid": True},
            ),
        ],
    )
    def test_invalid(self, raw: dict[str, Any]) -> None:
        """Invalid configurations are rejected before anything runs."""
        with pytest.raises(ConfigError):
            parse_config(raw)

    def test_sweep(self) -> None:
        """A level sweep with a `[spai]` section is accepted."""
        config = parse_config(
            _raw(spai={}, sweep={"parameter": "level", "values": [0, 1, 2]})
        )
        assert config.sweep is not None
        assert config.sweep.parameter is SweepParameter.LEVEL
        assert config.sweep.workers == 4

    def test_frozen(self) -> None:
        """Configurations cannot be changed after validation."""
        config = parse_config(_raw())
        with pytest.raises(TypeError):
            config.seed = 5  # type: ignore[misc]


class TestOverrides:
    """Tests for the command line overrides."""

    @pytest.fixture()
    def config(self) -> RunConfig:
        """Create a valid configuration."""
        return parse_config(_raw())

    def test_seed(self, config: RunConfig) -> None:
        """The seed can be replaced."""
        assert config.with_overrides(seed=11).seed == 11
        assert config.with_overrides().seed == 3

    def test_directory(self, config: RunConfig, tmp_path: pathlib.Path) -> None:
        """The output directory can be replaced."""
        assert config.with_overrides(directory=tmp_path).output.directory == tmp_path

    def test_negative_seed(self, config: RunConfig) -> None:
        """Negative seeds are rejected."""
        with pytest.raises(ConfigError):
            config.with_overrides(seed=-2)


class TestLoadConfig:
    """Tests for reading TOML files."""

    def test_relative_paths(self, tmp_path: pathlib.Path) -> None:
        """File paths are relative to the configuration file."""
        (tmp_path / "inputs").mkdir()
        (tmp_path / "inputs" / "rhs.txt").write_text("1.0\n2.0\n3.0\n4.0\n")
        config_path = tmp_path / "run.toml"
        config_path.write_text(
            """
            experiment = "relative"
            seed = 1

            [matrix]
            source = "identity"
            size = 4
            rhs = "inputs/rhs.txt"
            """
        )
        config = load_config(config_path)
        assert config.matrix.rhs == tmp_path / "inputs" / "rhs.txt"

    def test_missing_input(self, tmp_path: pathlib.Path) -> None:
        """Referenced files must exist."""
        config_path = tmp_path / "run.toml"
        config_path.write_text(
            'experiment = "x"\nseed = 1\n[matrix]\nsource = "file"\n'
            'path = "missing.mtx"\n'
        )
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(config_path)

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        """A missing configuration file is a configuration error."""
        with pytest.raises(ConfigError, match="can't read"):
            load_config(tmp_path / "nothing.toml")

    def test_not_toml(self, tmp_path: pathlib.Path) -> None:
        """Syntax errors are configuration errors."""
        config_path = tmp_path / "run.toml"
        config_path.write_text("experiment = \n")
        with pytest.raises(ConfigError):
            load_config(config_path)
