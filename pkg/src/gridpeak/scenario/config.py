"""Configuration of scenario runs."""

import importlib.resources
import json
from pathlib import Path

import pydantic

from gridpeak.exceptions import NetworkFileError
from gridpeak.optimize import CaseMode, EventSpec, SwarmConfig
from gridpeak.util import hour_window

_RESOURCES_DIR = importlib.resources.files("gridpeak.resources")

DEFAULT_EVENT_HOURS = (10, 21)
DEFAULT_VOLTAGE_HOURS = (10, 14)


def resource_path(name: str) -> Path:
    """
    Get the path of a packaged fixture.

    Parameters
    ----------
    name
        The file name, e.g. ``feeder20.json``.

    Returns
    -------
    ``Path``
        The path to the fixture.
    """
    return Path(str(_RESOURCES_DIR.joinpath(name)))


class RunSettings(pydantic.BaseModel):
    """Settings of a run, as they appear in a run config file."""

    case_mode: CaseMode = CaseMode.STATIC
    event_hours: list[int] = pydantic.Field(
        default_factory=lambda: hour_window(*DEFAULT_EVENT_HOURS)
    )
    mcl: float = pydantic.Field(default=0.5, ge=0, le=1)
    v_bounds: tuple[float, float] = (0.90, 1.05)
    v_sub_bounds: tuple[float, float] = (0.90, 1.05)
    v_sub_nominal: float = 1.0
    voltage_hours: list[int] = pydantic.Field(
        default_factory=lambda: list(DEFAULT_VOLTAGE_HOURS)
    )
    """Hours for which per-bus voltages are reported."""

    demand_factor: pydantic.PositiveFloat = 1.0
    """Multiplier on all baseline loads."""

    swarm: SwarmConfig = pydantic.Field(default_factory=SwarmConfig)

    model_config = {"extra": "forbid"}

    @pydantic.field_validator("case_mode", mode="before")
    @classmethod
    def _parse_case_mode(cls, value: str | CaseMode) -> CaseMode:
        return CaseMode.parse(value)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunSettings":
        """
        Read run settings from a ``json`` file.

        Parameters
        ----------
        path
            The path to the file.

        Returns
        -------
        ``RunSettings``
            The settings.

        Raises
        ------
        NetworkFileError
            If the file cannot be parsed or contains unknown or invalid settings.
        """
        try:
            with Path(path).open(encoding="utf-8") as file:
                return cls.model_validate(json.load(file))
        except (json.JSONDecodeError, pydantic.ValidationError) as e:
            msg = f"Invalid run config {path}: {e}"
            raise NetworkFileError(msg) from e

    def event_spec(self, prices: dict[int, float]) -> EventSpec:
        """
        Create the event these settings describe.

        Parameters
        ----------
        prices
            The energy price by hour, in USD/kWh.

        Returns
        -------
        ``EventSpec``
            The event.
        """
        market_prices = {
            hour: prices[hour] for hour in self.event_hours if hour in prices
        }

        return EventSpec(
            event_hours=self.event_hours,
            market_prices=market_prices,
            mcl=self.mcl,
            v_bounds=self.v_bounds,
            v_sub_bounds=self.v_sub_bounds,
            v_sub_nominal=self.v_sub_nominal,
            case_mode=self.case_mode,
        )


class ScenarioConfig(pydantic.BaseModel):
    """Everything needed to run one case: input files, settings and output directory."""

    network_path: pydantic.FilePath
    weather_path: pydantic.FilePath | None = None
    prices_path: pydantic.FilePath
    output_dir: Path
    settings: RunSettings = pydantic.Field(default_factory=RunSettings)

    model_config = {"extra": "forbid"}

    @pydantic.model_validator(mode="after")
    def _check_weather(self) -> "ScenarioConfig":
        if self.case_mode.uses_dtr and self.weather_path is None:
            msg = "Dynamic ratings need a weather file."
            raise ValueError(msg)

        return self

    @property
    def case_mode(self) -> CaseMode:
        """The case mode."""
        return self.settings.case_mode

    @property
    def event_hours(self) -> list[int]:
        """The event hours."""
        return self.settings.event_hours

    @property
    def seed(self) -> int:
        """The swarm seed."""
        return self.settings.swarm.seed

    @property
    def demand_factor(self) -> float:
        """The multiplier on all baseline loads."""
        return self.settings.demand_factor

    def for_case(self, case_mode: CaseMode, output_dir: Path) -> "ScenarioConfig":
        """
        Get the same scenario for another case, writing to another directory.

        Parameters
        ----------
        case_mode
            The case mode.
        output_dir
            The output directory.

        Returns
        -------
        ``ScenarioConfig``
            The scenario for the case.
        """
        settings = self.settings.model_copy(update={"case_mode": case_mode})

        return self.model_copy(update={"settings": settings, "output_dir": output_dir})
