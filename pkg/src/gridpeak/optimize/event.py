"""Peak events and the schedules that result from optimizing them."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import pydantic

from gridpeak.powerflow import V_SUB_RANGE, PowerFlowResult
from gridpeak.util import HOURS_PER_DAY


class CaseMode(Enum):
    """Which peak management measures are available."""

    STATIC = "static"
    """Curtailment only, fixed substation voltage and static ratings."""

    CVR = "cvr"
    """Curtailment and conservation voltage reduction, static ratings."""

    CVR_DTR = "cvr_dtr"
    """Curtailment, conservation voltage reduction and dynamic thermal ratings."""

    @classmethod
    def parse(cls, value: "str | CaseMode") -> "CaseMode":
        """
        Parse a case mode, accepting both ``cvr_dtr`` and ``cvr-dtr``.

        Parameters
        ----------
        value
            The case mode, or its name.

        Returns
        -------
        ``CaseMode``
            The case mode.
        """
        if isinstance(value, CaseMode):
            return value

        return cls(value.strip().lower().replace("-", "_"))

    @property
    def uses_cvr(self) -> bool:
        """Whether the substation voltage is a decision variable."""
        return self != CaseMode.STATIC

    @property
    def uses_dtr(self) -> bool:
        """Whether ratings are dynamic."""
        return self == CaseMode.CVR_DTR


class EventSpec(pydantic.BaseModel):
    """A peak event: the hours, prices and limits that apply."""

    event_hours: list[int]
    """The hours of the event, in order."""

    market_prices: dict[int, pydantic.NonNegativeFloat]
    """The energy price of every event hour, in USD/kWh."""

    mcl: float = pydantic.Field(default=0.5, ge=0, le=1)
    """The maximum curtailment level, as a fraction of a load."""

    v_bounds: tuple[float, float] = (0.90, 1.05)
    """The allowed bus voltage range, in per unit."""

    v_sub_bounds: tuple[float, float] = (0.90, 1.05)
    """The range of the substation voltage, in per unit."""

    v_sub_nominal: float = 1.0
    """The substation voltage when it is not a decision variable."""

    case_mode: CaseMode = CaseMode.STATIC
    """Which measures are available."""

    model_config = {"extra": "forbid"}

    @pydantic.field_validator("case_mode", mode="before")
    @classmethod
    def _parse_case_mode(cls, value: str | CaseMode) -> CaseMode:
        return CaseMode.parse(value)

    @pydantic.model_validator(mode="after")
    def _check(self) -> "EventSpec":
        if len(self.event_hours) == 0:
            msg = "An event needs at least one hour."
            raise ValueError(msg)

        if any(not 0 <= hour < HOURS_PER_DAY for hour in self.event_hours):
            msg = f"Event hours {self.event_hours} must be within 0-23."
            raise ValueError(msg)

        if len(set(self.event_hours)) != len(self.event_hours):
            msg = f"Event hours {self.event_hours} contain duplicates."
            raise ValueError(msg)

        for name, (low, high) in (
            ("v_bounds", self.v_bounds),
            ("v_sub_bounds", self.v_sub_bounds),
        ):
            if not low < high:
                msg = f"{name} must have min < max (got {low}, {high})."
                raise ValueError(msg)

        sub_low, sub_high = V_SUB_RANGE
        v_sub_low, v_sub_high = self.v_sub_bounds

        if v_sub_low < sub_low or v_sub_high > sub_high:
            msg = (
                f"v_sub_bounds ({v_sub_low}, {v_sub_high}) must lie within "
                f"[{sub_low}, {sub_high}]."
            )
            raise ValueError(msg)

        if not sub_low <= self.v_sub_nominal <= sub_high:
            msg = (
                f"v_sub_nominal ({self.v_sub_nominal}) must lie within "
                f"[{sub_low}, {sub_high}]."
            )
            raise ValueError(msg)

        missing = [hour for hour in self.event_hours if hour not in self.market_prices]

        if missing:
            msg = f"No market price for event hours {missing}."
            raise ValueError(msg)

        return self


def _flow_to_dict(flow: PowerFlowResult) -> dict[str, Any]:
    return {
        "bus_ids": list(flow.bus_ids),
        "section_ids": list(flow.section_ids),
        "v_re": flow.bus_voltages.real.tolist(),
        "v_im": flow.bus_voltages.imag.tolist(),
        "i_re": flow.section_currents.real.tolist(),
        "i_im": flow.section_currents.imag.tolist(),
        "i_sub": [flow.substation_current.real, flow.substation_current.imag],
        "v_sub": flow.v_sub,
        "base_power": flow.base_power,
        "base_current": flow.base_current,
        "load_kw": flow.load_kw,
        "loss_kw": flow.loss_kw,
        "iterations": flow.iterations,
        "converged": flow.converged,
    }


def _flow_from_dict(data: dict[str, Any]) -> PowerFlowResult:
    return PowerFlowResult(
        bus_ids=tuple(data["bus_ids"]),
        section_ids=tuple(data["section_ids"]),
        bus_voltages=np.array(data["v_re"]) + 1j * np.array(data["v_im"]),
        section_currents=np.array(data["i_re"]) + 1j * np.array(data["i_im"]),
        v_sub=data["v_sub"],
        base_power=data["base_power"],
        base_current=data["base_current"],
        load_kw=data["load_kw"],
        loss_kw=data["loss_kw"],
        iterations=data["iterations"],
        converged=data["converged"],
        substation_current=complex(*data["i_sub"]),
    )


@dataclass(frozen=True, eq=False)
class HourSchedule:
    """The chosen operating point of one event hour."""

    hour: int
    """The hour."""

    v_sub: float
    """The substation voltage, in per unit."""

    chi: np.ndarray
    """The curtailed fraction of every load, zero if not curtailable."""

    load_buses: tuple[int, ...]
    """The bus of every load, in the order of ``chi``."""

    price: float
    """The energy price, in USD/kWh."""

    energy_cost_usd: float
    """The cost of the purchased energy, zero if the power flow diverged."""

    curtailment_cost_usd: float
    """The penalty paid for curtailment."""

    feasible: bool
    """Whether all voltage, current and curtailment limits are met."""

    flow: PowerFlowResult | None
    """The power flow of the chosen operating point, if it converged."""

    ratings: np.ndarray
    """The rating of every branch that applied in this hour, in A."""

    curtailed_kw: np.ndarray = field(default_factory=lambda: np.zeros(0))
    """The curtailed baseline power of every load, in kW."""

    violation: float = 0.0
    """The summed constraint violation of the chosen operating point."""

    trace: tuple[float, ...] = ()
    """The best penalized cost after every swarm iteration."""

    @property
    def purchased_kw(self) -> float:
        """The active power bought at the substation."""
        return self.flow.purchased_kw if self.flow is not None else float("nan")

    @property
    def diverged(self) -> bool:
        """Whether the power flow of the chosen operating point diverged."""
        return self.flow is None

    @property
    def total_cost_usd(self) -> float:
        """The total cost of the hour."""
        return self.energy_cost_usd + self.curtailment_cost_usd

    @property
    def curtailments(self) -> dict[int, float]:
        """The curtailed fraction of every curtailed load, by bus."""
        return {
            bus: float(chi)
            for bus, chi in zip(self.load_buses, self.chi, strict=True)
            if chi > 0
        }

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the hour schedule to a ``dict``.

        Returns
        -------
        ``dict[str, Any]``
            The hour schedule, including the power flow snapshot.
        """
        return {
            "hour": self.hour,
            "v_sub": self.v_sub,
            "chi": self.chi.tolist(),
            "load_buses": list(self.load_buses),
            "price_usd_per_kwh": self.price,
            "purchased_kw": None if self.diverged else self.purchased_kw,
            "energy_cost_usd": self.energy_cost_usd,
            "curtailment_cost_usd": self.curtailment_cost_usd,
            "total_cost_usd": self.total_cost_usd,
            "curtailed_kw": self.curtailed_kw.tolist(),
            "feasible": self.feasible,
            "violation": self.violation,
            "ratings_a": self.ratings.tolist(),
            "trace": list(self.trace),
            "flow": _flow_to_dict(self.flow) if self.flow is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HourSchedule":
        """
        Create an hour schedule from a ``dict``.

        Parameters
        ----------
        data
            The hour schedule, as created by ``to_dict``.

        Returns
        -------
        ``HourSchedule``
            The hour schedule.
        """
        return cls(
            hour=data["hour"],
            v_sub=data["v_sub"],
            chi=np.array(data["chi"], dtype=float),
            load_buses=tuple(data["load_buses"]),
            price=data["price_usd_per_kwh"],
            energy_cost_usd=data["energy_cost_usd"],
            curtailment_cost_usd=data["curtailment_cost_usd"],
            feasible=data["feasible"],
            flow=_flow_from_dict(data["flow"]) if data["flow"] is not None else None,
            ratings=np.array(data["ratings_a"], dtype=float),
            curtailed_kw=np.array(data["curtailed_kw"], dtype=float),
            violation=data["violation"],
            trace=tuple(data["trace"]),
        )


@dataclass(frozen=True, eq=False)
class EventSchedule:
    """The optimized operation over all hours of a peak event."""

    case_mode: CaseMode
    """The measures that were available."""

    hours: tuple[HourSchedule, ...]
    """The schedule of every event hour, in order."""

    @property
    def total_cost_usd(self) -> float:
        """
        The total cost over the event.

        The energy cost of hours whose power flow diverged is unknown, and left out.
        """
        return sum(hour.total_cost_usd for hour in self.hours)

    @property
    def infeasible_hours(self) -> list[int]:
        """The hours for which no feasible operating point was found."""
        return [hour.hour for hour in self.hours if not hour.feasible]

    @property
    def diverged_hours(self) -> list[int]:
        """The hours for which the power flow of the chosen point diverged."""
        return [hour.hour for hour in self.hours if hour.diverged]

    @property
    def feasible(self) -> bool:
        """Whether every hour is feasible."""
        return len(self.infeasible_hours) == 0

    @property
    def curtailed_kwh(self) -> float:
        """The total curtailed baseline energy over the event."""
        return float(sum(hour.curtailed_kw.sum() for hour in self.hours))

    def hour(self, hour: int) -> HourSchedule:
        """
        Get the schedule of one hour.

        Parameters
        ----------
        hour
            The hour.

        Returns
        -------
        ``HourSchedule``
            The schedule of the hour.

        Raises
        ------
        KeyError
            If the hour is not part of the event.
        """
        for schedule in self.hours:
            if schedule.hour == hour:
                return schedule

        msg = f"Hour {hour} is not part of this event."
        raise KeyError(msg)

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the schedule to a ``dict``.

        Returns
        -------
        ``dict[str, Any]``
            The schedule.
        """
        return {
            "case_mode": self.case_mode.value,
            "total_cost_usd": self.total_cost_usd,
            "feasible": self.feasible,
            "hours": [hour.to_dict() for hour in self.hours],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EventSchedule":
        """
        Create a schedule from a ``dict``.

        Parameters
        ----------
        data
            The schedule, as created by ``to_dict``.

        Returns
        -------
        ``EventSchedule``
            The schedule.
        """
        return cls(
            case_mode=CaseMode(data["case_mode"]),
            hours=tuple(HourSchedule.from_dict(hour) for hour in data["hours"]),
        )
