# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""The `frequenz-qlsa` command line."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from ._commands import COMMANDS
from ._config import Command, load_config
from ._exceptions import ConfigError, NumericalFailure
from ._records import ResultRecord, write_records
from ._report import render_report
from ._sweep import cmd_sweep

_logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
"""Every record was produced and every solve converged."""

EXIT_INVALID = 1
"""The configuration or the command line is invalid."""

EXIT_NUMERICAL = 2
"""A run did not converge or hit a degenerate or singular system."""

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class _ArgumentParser(argparse.ArgumentParser):
    """An argument parser reporting usage errors as invalid configuration."""

    def error(self, message: str) -> NoReturn:
        """Raise instead of exiting with argparse's own status.

        Args:
            message: the usage error.

        Raises:
            ConfigError: always.
        """
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=Path, help="the TOML run configuration"
    )
    common.add_argument(
        "--out", type=Path, help="the output directory, overriding the config"
    )
    common.add_argument(
        "--seed", type=int, help="the random seed, overriding the config"
    )
    common.add_argument(
        "--verbose", action="store_true", help="log numerical diagnostics"
    )

    parser = _ArgumentParser(
        prog="frequenz-qlsa",
        description="Run preconditioned quantum linear solver experiments.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "solve": "classical solve, with and without preconditioning",
        "spai": "sparse approximate inverse and its condition number bound",
        "qlsa": "quantum solver run with fidelity and readout probabilities",
        "rcs": "classical, quantum and closed-form cross sections",
        "sweep": "repeat a command over the values of a parameter",
        "report": "print the records of an output directory",
    }
    for name, description in descriptions.items():
        commands.add_parser(
            name, parents=[common], help=description, description=description
        )
    return parser


def _run(args: argparse.Namespace) -> list[ResultRecord]:
    if args.config is None:
        raise ConfigError(f"{args.command} needs --config")
    config = load_config(args.config).with_overrides(
        seed=args.seed, directory=args.out
    )
    if args.command == "sweep":
        records = cmd_sweep(config)
    else:
        records = [COMMANDS[Command(args.command)](config)]
    try:
        write_records(config.output.directory, config.experiment, records)
    except OSError as err:
        raise ConfigError(f"can't write the results: {err}") from err
    return records


def _report(args: argparse.Namespace) -> None:
    if args.out is not None:
        directory = args.out
    elif args.config is not None:
        directory = load_config(args.config).output.directory
    else:
        raise ConfigError("report needs --out or --config")
    sys.stdout.write(render_report(directory))


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line.

    Args:
        argv: the arguments, `sys.argv[1:]` if `None`.

    Returns:
        The exit status: 0 on success, 1 for an invalid configuration and 2
            for a numerical failure, including solves that did not converge.
    """
    try:
        args = _parser().parse_args(argv)
    except ConfigError:
        return EXIT_INVALID
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO, format=_LOG_FORMAT
    )
    try:
        if args.command == "report":
            _report(args)
            return EXIT_SUCCESS
        records = _run(args)
    except ConfigError as err:
        _logger.error("invalid configuration: %s", err)
        return EXIT_INVALID
    except NumericalFailure as err:
        _logger.error("numerical failure: %s", err)
        return EXIT_NUMERICAL
    failed = [record for record in records if record.converged is False]
    if failed:
        _logger.error("%d of %d runs did not converge", len(failed), len(records))
        return EXIT_NUMERICAL
    return EXIT_SUCCESS
