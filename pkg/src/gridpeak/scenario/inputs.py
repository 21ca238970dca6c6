"""Loading the inputs of a scenario."""

import hashlib
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from gridpeak.exceptions import NetworkFileError
from gridpeak.grid import BibcMatrix, RadialNetwork, build_bibc, load_feeder
from gridpeak.load import LoadTable
from gridpeak.powerflow import ImpedanceMatrix, build_upsilon
from gridpeak.scenario.config import ScenarioConfig
from gridpeak.thermal import WeatherSample, read_weather

PRICE_COLUMNS = ("hour", "usd_per_kwh")


def read_prices(path: str | Path) -> dict[int, float]:
    """
    Read hourly energy prices from a ``csv`` file with columns ``hour, usd_per_kwh``.

    Parameters
    ----------
    path
        The path to the file.

    Returns
    -------
    ``dict[int, float]``
        The price by hour, in USD/kWh.

    Raises
    ------
    NetworkFileError
        If the file lacks columns, repeats hours or contains negative prices.
    """
    frame = pd.read_csv(path)
    missing = [column for column in PRICE_COLUMNS if column not in frame.columns]

    if missing:
        msg = f"Price file {path} lacks the columns {missing}."
        raise NetworkFileError(msg)

    if frame["hour"].duplicated().any():
        msg = f"Price file {path} contains duplicate hours."
        raise NetworkFileError(msg)

    if (frame["usd_per_kwh"] < 0).any():
        msg = f"Price file {path} contains negative prices."
        raise NetworkFileError(msg)

    return {
        int(hour): float(price)
        for hour, price in zip(frame["hour"], frame["usd_per_kwh"], strict=True)
    }


def input_fingerprint(config: ScenarioConfig) -> str:
    """
    Compute a fingerprint of everything the cases of a scenario must share.

    This covers the contents of the input files, the demand factor and the event hours,
    but not the case mode or seed.

    Parameters
    ----------
    config
        The scenario.

    Returns
    -------
    ``str``
        A hexadecimal digest.
    """
    digest = hashlib.sha256()

    for path in (config.network_path, config.weather_path, config.prices_path):
        digest.update(Path(path).read_bytes() if path is not None else b"-")
        digest.update(b"\0")

    digest.update(repr(config.demand_factor).encode())
    digest.update(repr(list(config.event_hours)).encode())

    return digest.hexdigest()


@dataclass(frozen=True, eq=False)
class ScenarioInputs:
    """The loaded inputs of a scenario."""

    network: RadialNetwork
    bibc: BibcMatrix
    upsilon: ImpedanceMatrix
    loads: LoadTable
    """The loads, with the demand factor applied."""

    prices: dict[int, float]
    weather: dict[int, WeatherSample] | None
    fingerprint: str


def load_inputs(config: ScenarioConfig) -> ScenarioInputs:
    """
    Load all inputs of a scenario, and prepare the network matrices.

    Parameters
    ----------
    config
        The scenario.

    Returns
    -------
    ``ScenarioInputs``
        The inputs.

    Raises
    ------
    NetworkFileError
        If dynamic ratings need weather for event hours the weather file lacks.
    """
    network, loads = load_feeder(config.network_path)
    bibc = build_bibc(network)
    weather = (
        read_weather(config.weather_path) if config.weather_path is not None else None
    )

    if weather is not None and config.case_mode.uses_dtr:
        missing = [hour for hour in config.event_hours if hour not in weather]

        if missing:
            msg = f"Weather file {config.weather_path} lacks the event hours {missing}."
            raise NetworkFileError(msg)

    return ScenarioInputs(
        network=network,
        bibc=bibc,
        upsilon=build_upsilon(network, bibc),
        loads=loads.scaled(config.demand_factor),
        prices=read_prices(config.prices_path),
        weather=weather,
        fingerprint=input_fingerprint(config),
    )
