"""Utility functions that are used throughout the library."""

import logging
import os

import numpy as np

from gridpeak.exceptions import ArgumentError

LOG_ENV_VAR = "GRIDPEAK_LOG"
HOURS_PER_DAY = 24


def hour_window(start: int, end: int) -> list[int]:
    """
    Expand an inclusive window of hours.

    Parameters
    ----------
    start
        The first hour of the window.
    end
        The last hour of the window (inclusive).

    Returns
    -------
    ``list[int]``
        The hours ``start, start + 1, ..., end``.

    Raises
    ------
    ArgumentError
        If the window is malformed, or falls outside of a day.
    """
    if end < start:
        msg = f"Input malformed hour window ({start}-{end})."
        raise ArgumentError(msg)

    if start < 0 or end >= HOURS_PER_DAY:
        msg = f"Hour window {start}-{end} is not within 0-{HOURS_PER_DAY - 1}."
        raise ArgumentError(msg)

    return list(range(start, end + 1))


def parse_hours(text: str) -> list[int]:
    """
    Parse an hour specification such as ``10-21`` or ``10,12,14``.

    Parameters
    ----------
    text
        The hour specification. Ranges are inclusive and may be mixed with single
        hours, e.g. ``8,10-12``.

    Returns
    -------
    ``list[int]``
        The sorted, unique hours.

    Raises
    ------
    ArgumentError
        If a part is not an hour or a window of hours within the day.
    """
    hours = set()

    for part in text.split(","):
        start, separator, end = part.strip().partition("-")

        try:
            window = (int(start), int(end if separator else start))
        except ValueError as e:
            msg = f"Input malformed hours {part.strip()!r}."
            raise ArgumentError(msg) from e

        hours.update(hour_window(*window))

    return sorted(hours)


def parse_floats(text: str) -> list[float]:
    """
    Parse a comma separated list of numbers, e.g. ``0.5,0.7,0.9``.

    Parameters
    ----------
    text
        The comma separated numbers.

    Returns
    -------
    ``list[float]``
        The parsed numbers, in the given order.

    Raises
    ------
    ArgumentError
        If a part is not a number.
    """
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        msg = f"Input malformed numbers {text!r}."
        raise ArgumentError(msg) from e


def particle_rng(seed: int, *counters: int) -> np.random.Generator:
    """
    Create a counter-based random stream.

    The stream depends only on the master seed and the counters (e.g. hour, iteration
    and particle index), so results never depend on the order in which streams are
    consumed.

    Parameters
    ----------
    seed
        The master seed.
    *counters
        Non-negative integers identifying the stream.

    Returns
    -------
    ``np.random.Generator``
        A generator backed by a ``Philox`` bit generator.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(counters))

    return np.random.Generator(np.random.Philox(sequence))


def configure_logging(level: str | None = None) -> None:
    """
    Configure the ``gridpeak`` logger for command line use.

    Parameters
    ----------
    level
        The log level name. If not provided, the ``GRIDPEAK_LOG`` environment variable
        is used, and ``WARNING`` if that is not set either.

    Raises
    ------
    ValueError
        If the level is not a known log level name.
    """
    level = (level or os.environ.get(LOG_ENV_VAR) or "WARNING").upper()

    if not isinstance(logging.getLevelName(level), int):
        msg = f"Unknown log level {level}."
        raise ValueError(msg)

    logger = logging.getLogger("gridpeak")
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
        logger.addHandler(handler)
