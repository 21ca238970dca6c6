"""Reading hourly weather series."""

from pathlib import Path

import pandas as pd

from gridpeak.exceptions import NetworkFileError
from gridpeak.thermal.ladder import WeatherSample

WEATHER_COLUMNS = ("hour", "ambient_c", "wind_mps", "solar_wm2")


def read_weather(path: str | Path) -> dict[int, WeatherSample]:
    """
    Read an hourly weather series from a ``csv`` file.

    The file needs a header with the columns ``hour``, ``ambient_c``, ``wind_mps`` and
    ``solar_wm2``.

    Parameters
    ----------
    path
        The path to the file.

    Returns
    -------
    ``dict[int, WeatherSample]``
        The weather samples, by hour.

    Raises
    ------
    NetworkFileError
        If the file lacks columns, repeats hours or contains invalid values.
    """
    frame = pd.read_csv(path)
    missing = [column for column in WEATHER_COLUMNS if column not in frame.columns]

    if missing:
        msg = f"Weather file {path} lacks the columns {missing}."
        raise NetworkFileError(msg)

    if frame["hour"].duplicated().any():
        msg = f"Weather file {path} contains duplicate hours."
        raise NetworkFileError(msg)

    try:
        return {
            int(row.hour): WeatherSample(
                ambient_c=float(row.ambient_c),
                wind_mps=float(row.wind_mps),
                solar_wm2=float(row.solar_wm2),
                hour=int(row.hour),
            )
            for row in frame.itertuples(index=False)
        }
    except ValueError as e:
        msg = f"Weather file {path} contains invalid values: {e}"
        raise NetworkFileError(msg) from e
