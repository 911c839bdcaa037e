# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Run configuration files.

A run is described by a TOML file, for example:

```toml
experiment = "wall"
seed = 7

[matrix]
source = "fem_slab"
size = 64
wavenumber = 2.0

[spai]
level = 1

[qlsa]
clock_qubits = 7
bits = 8
```

Everything is validated, and every referenced file checked for existence,
before any computation starts.
"""

import enum
import logging
import math
import tomllib
from pathlib import Path
from typing import Any, Literal

# pylint not finding these is a false positive
from pydantic import (  # pylint: disable=no-name-in-module
    BaseModel,
    Extra,
    ValidationError,
    root_validator,
    validator,
)

from .._internal._constants import DEFAULT_QUBIT_CAP
from ..fem import AbsorbingBoundary
from ..qsim import Backend
from ..spai import Side
from ._exceptions import ConfigError

_logger = logging.getLogger(__name__)

_FILE_FIELDS = ("path", "rhs", "reference", "mesh")


class _Section(BaseModel):
    """Base of every configuration section."""

    class Config:
        """Reject unknown fields and freeze the values."""

        extra = Extra.forbid
        allow_mutation = False


class MatrixSource(enum.Enum):
    """Where the system matrix of a run comes from."""

    IDENTITY = "identity"
    """The identity of dimension `size`."""

    TRIDIAGONAL = "tridiagonal"
    """The tridiagonal Toeplitz matrix `(off_diagonal, diagonal, off_diagonal)`."""

    RANDOM_HERMITIAN = "random_hermitian"
    """A seeded random Hermitian matrix of sparsity `sparsity`."""

    DIAGONAL = "diagonal"
    """A diagonal matrix with the given `eigenvalues`."""

    FILE = "file"
    """A Matrix Market file."""

    FEM_SLAB = "fem_slab"
    """The 1-D conducting wall problem with `size` elements."""

    FEM_CIRCLE = "fem_circle"
    """The 2-D conducting cylinder problem."""

    @property
    def is_fem(self) -> bool:
        """Whether the matrix comes from a scattering problem."""
        return self in (MatrixSource.FEM_SLAB, MatrixSource.FEM_CIRCLE)


class MatrixConfig(_Section):
    """The `[matrix]` section."""

    source: MatrixSource
    size: int = 16
    sparsity: int = 3
    eigenvalues: list[float] | None = None
    diagonal: float = 2.0
    off_diagonal: float = -1.0
    path: Path | None = None
    rhs: Path | None = None
    reference: Path | None = None
    mesh: Path | None = None
    wavenumber: float = 1.0
    length: float = 1.0
    radius: float = 1.0
    outer_radius: float = 4.0
    radial: int = 8
    angular: int = 40
    incidence: float = 0.0
    observation: float = math.pi
    boundary: AbsorbingBoundary = AbsorbingBoundary.FIRST_ORDER

    @validator("size", "sparsity", "radial", "angular")
    @classmethod
    def _check_positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"count ({value}) must be positive")
        return value

    @validator("wavenumber", "length", "radius", "outer_radius")
    @classmethod
    def _check_positive_length(cls, value: float) -> float:
        if value <= 0.0:
            raise ValueError(f"value ({value}) must be positive")
        return value

    @validator(*_FILE_FIELDS)
    @classmethod
    def _check_exists(cls, value: Path | None) -> Path | None:
        if value is not None and not value.is_file():
            raise ValueError(f"file {value} does not exist")
        return value

    @root_validator(skip_on_failure=True)
    @classmethod
    def _check_source(cls, values: dict[str, Any]) -> dict[str, Any]:
        source = values["source"]
        if source is MatrixSource.FILE and values["path"] is None:
            raise ValueError("a file matrix needs a path")
        if source is MatrixSource.DIAGONAL:
            eigenvalues = values["eigenvalues"]
            if eigenvalues is not None and 0.0 in eigenvalues:
                raise ValueError("a diagonal matrix with a zero is singular")
        if source is MatrixSource.FEM_CIRCLE and (
            values["mesh"] is None and values["radius"] >= values["outer_radius"]
        ):
            raise ValueError("the outer radius must exceed the cylinder radius")
        if source.is_fem and values["rhs"] is not None:
            raise ValueError("scattering problems build their own right-hand side")
        return values


class SpaiConfig(_Section):
    """The `[spai]` section; its presence turns preconditioning on."""

    level: int = 1
    side: Side = Side.LEFT
    max_workers: int | None = None

    @validator("level")
    @classmethod
    def _check_level(cls, value: int) -> int:
        if value not in (0, 1, 2):
            raise ValueError(f"pattern level ({value}) must be 0, 1 or 2")
        return value


class QlsaConfig(_Section):
    """The `[qlsa]` section."""

    clock_qubits: int = 6
    t0: Literal["kappa"] | float = "kappa"
    inversion_constant: Literal["grid"] | float = "grid"
    backend: Backend = Backend.EXACT
    trotter_order: int = 2
    trotter_steps: int = 1
    bits: int | None = None
    epsilon: float = 1e-2
    on_grid: bool = False
    qubit_cap: int = DEFAULT_QUBIT_CAP

    @validator("clock_qubits")
    @classmethod
    def _check_clock(cls, value: int) -> int:
        if not 1 <= value <= 16:
            raise ValueError(f"clock_qubits ({value}) must be in [1, 16]")
        return value

    @validator("t0", "inversion_constant", "epsilon")
    @classmethod
    def _check_positive(cls, value: str | float) -> str | float:
        if isinstance(value, float) and value <= 0.0:
            raise ValueError(f"value ({value}) must be positive")
        return value

    @validator("trotter_order")
    @classmethod
    def _check_order(cls, value: int) -> int:
        if value != 1 and (value < 2 or value % 2):
            raise ValueError(f"trotter_order ({value}) must be 1 or even")
        return value

    @validator("trotter_steps")
    @classmethod
    def _check_steps(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"trotter_steps ({value}) must be positive")
        return value

    @validator("bits")
    @classmethod
    def _check_bits(cls, value: int | None) -> int | None:
        if value is not None and not 1 <= value <= 16:
            raise ValueError(f"bits ({value}) must be in [1, 16]")
        return value


class CgConfig(_Section):
    """The `[cg]` section."""

    tol: float = 1e-10
    max_iter: int | None = None

    @validator("tol")
    @classmethod
    def _check_tol(cls, value: float) -> float:
        if value <= 0.0:
            raise ValueError(f"tol ({value}) must be positive")
        return value


class SweepParameter(enum.Enum):
    """The parameter a sweep varies."""

    SIZE = "size"
    """The matrix dimension, or the number of slab elements."""

    CLOCK_QUBITS = "clock_qubits"
    """The number of clock qubits `t`."""

    TROTTER_STEPS = "trotter_steps"
    """The product formula steps."""

    BITS = "bits"
    """The amplitude estimation bits."""

    LEVEL = "level"
    """The sparsity pattern level."""


class Command(enum.Enum):
    """The single-point commands a sweep can repeat."""

    SOLVE = "solve"
    SPAI = "spai"
    QLSA = "qlsa"
    RCS = "rcs"


class SweepConfig(_Section):
    """The `[sweep]` section."""

    parameter: SweepParameter
    values: list[int]
    command: Command = Command.QLSA
    workers: int = 4

    @validator("values")
    @classmethod
    def _check_values(cls, value: list[int]) -> list[int]:
        if not value:
            raise ValueError("a sweep needs at least one value")
        return value

    @validator("workers")
    @classmethod
    def _check_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"workers ({value}) must be positive")
        return value


class OutputConfig(_Section):
    """The `[output]` section."""

    directory: Path = Path("results")


class RunConfig(_Section):
    """A complete, validated run configuration."""

    experiment: str
    seed: int
    matrix: MatrixConfig
    spai: SpaiConfig | None = None
    qlsa: QlsaConfig = QlsaConfig()
    cg: CgConfig = CgConfig()
    sweep: SweepConfig | None = None
    output: OutputConfig = OutputConfig()

    @validator("experiment")
    @classmethod
    def _check_experiment(cls, value: str) -> str:
        if not value or not all(c.isalnum() or c in "-_." for c in value):
            raise ValueError(
                f"experiment name {value!r} must be a non-empty file name stem"
            )
        return value

    @validator("seed")
    @classmethod
    def _check_seed(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"seed ({value}) must not be negative")
        return value

    @root_validator(skip_on_failure=True)
    @classmethod
    def _check_combination(cls, values: dict[str, Any]) -> dict[str, Any]:
        qlsa: QlsaConfig = values["qlsa"]
        if qlsa.on_grid:
            if values["matrix"].source is not MatrixSource.RANDOM_HERMITIAN:
                raise ValueError("on_grid needs a random_hermitian matrix")
            if qlsa.t0 == "kappa":
                raise ValueError("on_grid needs an explicit t0")
        sweep: SweepConfig | None = values["sweep"]
        if sweep is not None and sweep.parameter is SweepParameter.LEVEL:
            if values["spai"] is None:
                raise ValueError("a level sweep needs a [spai] section")
        return values

    def with_overrides(
        self, *, seed: int | None = None, directory: Path | None = None
    ) -> "RunConfig":
        """Get a copy with the command line overrides applied.

        Args:
            seed: the seed to use instead of the configured one.
            directory: the output directory to use instead of the configured one.

        Returns:
            The new configuration.

        Raises:
            ConfigError: if the seed is negative.
        """
        update: dict[str, Any] = {}
        if seed is not None:
            if seed < 0:
                raise ConfigError(f"seed ({seed}) must not be negative")
            update["seed"] = seed
        if directory is not None:
            update["output"] = OutputConfig(directory=directory)
        return self.copy(update=update)


def _resolve_paths(raw: dict[str, Any], base: Path) -> dict[str, Any]:
    matrix = raw.get("matrix")
    if not isinstance(matrix, dict):
        return raw
    resolved = dict(matrix)
    for key in _FILE_FIELDS:
        value = resolved.get(key)
        if isinstance(value, str) and not Path(value).is_absolute():
            resolved[key] = str(base / value)
    return {**raw, "matrix": resolved}


def parse_config(raw: dict[str, Any], base: Path | None = None) -> RunConfig:
    """Validate a run configuration.

    Args:
        raw: the parsed TOML document.
        base: the directory relative file paths are resolved against; the
            current directory if `None`.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: if the configuration is invalid.
    """
    if base is not None:
        raw = _resolve_paths(raw, base)
    try:
        return RunConfig.parse_obj(raw)
    except ValidationError as err:
        _logger.error("invalid run configuration: %s", err)
        raise ConfigError(str(err)) from err


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run configuration.

    Relative file paths in the `[matrix]` section are resolved against the
    directory of the configuration file.

    Args:
        path: the TOML file.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: if the file cannot be read, is not TOML or is invalid.
    """
    config_path = Path(path)
    try:
        with config_path.open("rb") as toml_file:
            raw = tomllib.load(toml_file)
    except (OSError, tomllib.TOMLDecodeError) as err:
        _logger.error("can't read config file %s: %s", config_path, err)
        raise ConfigError(f"can't read config file {config_path}: {err}") from err
    return parse_config(raw, config_path.parent)
