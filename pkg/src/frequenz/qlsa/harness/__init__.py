# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Reproducible experiment driver.

A TOML run configuration names the system to build (a synthetic matrix, a
Matrix Market file or a scattering problem), the preconditioner and the
solver parameters. The commands `solve`, `spai`, `qlsa` and `rcs` run one
experiment on it and `sweep` repeats one of them over the values of a
parameter. Every run writes a versioned JSON record file and a tab separated
table; `report` prints them.

Exit statuses: 0 on success, 1 for invalid configurations, 2 for numerical
failures.
"""

from ._cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_SUCCESS, main
from ._commands import (
    COMMANDS,
    LinearSystem,
    build_system,
    cmd_qlsa,
    cmd_rcs,
    cmd_solve,
    cmd_spai,
    make_preconditioner,
    precondition,
    qlsa_params,
)
from ._config import (
    CgConfig,
    Command,
    MatrixConfig,
    MatrixSource,
    OutputConfig,
    QlsaConfig,
    RunConfig,
    SpaiConfig,
    SweepConfig,
    SweepParameter,
    load_config,
    parse_config,
)
from ._exceptions import ConfigError, HarnessError, NumericalFailure
from ._records import (
    SCHEMA_VERSION,
    ResultRecord,
    format_table,
    read_records,
    write_records,
)
from ._report import render_report
from ._sweep import cmd_sweep, run_sweep, sweep_point

__all__ = [
    "COMMANDS",
    "CgConfig",
    "Command",
    "ConfigError",
    "EXIT_INVALID",
    "EXIT_NUMERICAL",
    "EXIT_SUCCESS",
    "HarnessError",
    "LinearSystem",
    "MatrixConfig",
    "MatrixSource",
    "NumericalFailure",
    "OutputConfig",
    "QlsaConfig",
    "ResultRecord",
    "RunConfig",
    "SCHEMA_VERSION",
    "SpaiConfig",
    "SweepConfig",
    "SweepParameter",
    "build_system",
    "cmd_qlsa",
    "cmd_rcs",
    "cmd_solve",
    "cmd_spai",
    "cmd_sweep",
    "format_table",
    "load_config",
    "main",
    "make_preconditioner",
    "parse_config",
    "precondition",
    "qlsa_params",
    "read_records",
    "render_report",
    "run_sweep",
    "sweep_point",
    "write_records",
]
