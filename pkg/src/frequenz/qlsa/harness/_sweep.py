# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Parameter sweeps over a worker pool."""

import asyncio
import logging
from typing import Any

from pydantic import ValidationError  # pylint: disable=no-name-in-module
from tqdm import tqdm

from ._commands import COMMANDS
from ._config import MatrixSource, RunConfig, SweepParameter
from ._exceptions import ConfigError
from ._records import ResultRecord

_logger = logging.getLogger(__name__)

CIRCLE_ASPECT = 5
"""Angular cells per radial cell when a size sweep refines a cylinder mesh."""


def _matrix_update(config: RunConfig, value: int) -> dict[str, Any]:
    if config.matrix.source is MatrixSource.FEM_CIRCLE:
        return {"radial": value, "angular": CIRCLE_ASPECT * value}
    return {"size": value}


def sweep_point(config: RunConfig, value: int) -> RunConfig:
    """Get the configuration of one sweep point.

    A size sweep sets the matrix dimension, the number of slab elements or
    the radial cells of a cylinder mesh. Every point keeps the seed of the
    sweep.

    Args:
        config: the sweep configuration.
        value: the value of the swept parameter.

    Returns:
        The validated configuration of the point, without a sweep.

    Raises:
        ConfigError: if the configuration has no sweep or the point is invalid.
    """
    sweep = config.sweep
    if sweep is None:
        raise ConfigError("the configuration has no [sweep] section")
    raw = config.dict(exclude={"sweep"})
    match sweep.parameter:
        case SweepParameter.SIZE:
            raw["matrix"].update(_matrix_update(config, value))
        case SweepParameter.CLOCK_QUBITS:
            raw["qlsa"]["clock_qubits"] = value
        case SweepParameter.TROTTER_STEPS:
            raw["qlsa"]["trotter_steps"] = value
        case SweepParameter.BITS:
            raw["qlsa"]["bits"] = value
        case SweepParameter.LEVEL:
            raw["spai"]["level"] = value
    try:
        return RunConfig.parse_obj(raw)
    except ValidationError as err:
        raise ConfigError(
            f"invalid sweep point {sweep.parameter.value}={value}: {err}"
        ) from err


async def run_sweep(
    config: RunConfig, *, progress: bool = True
) -> list[ResultRecord]:
    """Run every point of a sweep.

    Points run in threads, at most `workers` at a time. The records come back
    in the order of the configured values, whatever order the points finish
    in.

    Args:
        config: the sweep configuration.
        progress: whether to show a progress bar.

    Returns:
        One record per value, tagged with the parameter and the value.

    Raises:
        ConfigError: if the configuration has no sweep or a point is invalid.
    """
    sweep = config.sweep
    if sweep is None:
        raise ConfigError("the configuration has no [sweep] section")
    # Validate every point before any of them runs.
    points = [sweep_point(config, value) for value in sweep.values]
    command = COMMANDS[sweep.command]
    name = sweep.parameter.value
    semaphore = asyncio.Semaphore(sweep.workers)
    _logger.info(
        "sweeping %s over %s with %d workers",
        name,
        sweep.values,
        sweep.workers,
    )

    with tqdm(
        total=len(points), desc=config.experiment, disable=not progress
    ) as bar:

        async def run_point(point: RunConfig, value: int) -> ResultRecord:
            async with semaphore:
                record = await asyncio.to_thread(command, point)
            bar.update()
            _logger.debug("%s=%d done", name, value)
            return record.copy(update={"parameter": name, "value": value})

        records = await asyncio.gather(
            *(run_point(point, value) for point, value in zip(points, sweep.values))
        )
    return list(records)


def cmd_sweep(config: RunConfig, *, progress: bool = True) -> list[ResultRecord]:
    """Run a sweep to completion.

    Args:
        config: the sweep configuration.
        progress: whether to show a progress bar.

    Returns:
        One record per value, in config order.
    """
    return asyncio.run(run_sweep(config, progress=progress))
