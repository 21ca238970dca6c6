"""Running a single case, and the artifacts it leaves behind."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from gridpeak.exceptions import NetworkFileError
from gridpeak.optimize import EventSchedule, optimize_event
from gridpeak.scenario.config import ScenarioConfig
from gridpeak.scenario.inputs import load_inputs

logger = logging.getLogger(__name__)

SCHEDULE_FILE = "schedule.json"
USD_COLUMNS = ("energy_cost_usd", "curtailment_cost_usd", "total_cost_usd")


def format_usd(
    frame: pd.DataFrame, columns: tuple[str, ...] = USD_COLUMNS
) -> pd.DataFrame:
    """
    Format monetary columns with two decimals.

    Parameters
    ----------
    frame
        The table.
    columns
        The monetary columns. Columns that are absent are skipped.

    Returns
    -------
    ``pd.DataFrame``
        A copy of the table, with the monetary columns as formatted strings.
    """
    frame = frame.copy()

    for column in columns:
        if column in frame.columns:
            frame[column] = frame[column].map("{:.2f}".format)

    return frame


@dataclass(frozen=True, eq=False)
class RunRecord:
    """The schedule of a case, with what is needed to compare it to other cases."""

    schedule: EventSchedule
    """The optimized schedule."""

    fingerprint: str
    """Fingerprint of the shared inputs."""

    seed: int
    demand_factor: float
    voltage_hours: tuple[int, ...]
    """Hours for which per-bus voltages are reported."""

    branch_ids: tuple[int, ...]
    branch_hops: tuple[int, ...]
    """Distance of every branch to the substation."""

    substation: int
    """The label of the substation bus."""

    @property
    def hop_map(self) -> dict[int, int]:
        """Distance of every branch to the substation, by branch."""
        return dict(zip(self.branch_ids, self.branch_hops, strict=True))

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the record to a ``dict``.

        Returns
        -------
        ``dict[str, Any]``
            The record.
        """
        return {
            "fingerprint": self.fingerprint,
            "seed": self.seed,
            "demand_factor": self.demand_factor,
            "voltage_hours": list(self.voltage_hours),
            "branch_ids": list(self.branch_ids),
            "branch_hops": list(self.branch_hops),
            "substation": self.substation,
            "schedule": self.schedule.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        """
        Create a record from a ``dict``.

        Parameters
        ----------
        data
            The record, as created by ``to_dict``.

        Returns
        -------
        ``RunRecord``
            The record.
        """
        return cls(
            schedule=EventSchedule.from_dict(data["schedule"]),
            fingerprint=data["fingerprint"],
            seed=data["seed"],
            demand_factor=data["demand_factor"],
            voltage_hours=tuple(data["voltage_hours"]),
            branch_ids=tuple(data["branch_ids"]),
            branch_hops=tuple(data["branch_hops"]),
            substation=data["substation"],
        )

    @classmethod
    def read(cls, path: str | Path) -> "RunRecord":
        """
        Read a record from a run directory, or from its ``schedule.json``.

        Parameters
        ----------
        path
            The run directory, or the schedule file.

        Returns
        -------
        ``RunRecord``
            The record.

        Raises
        ------
        NetworkFileError
            If the file is not a valid run record.
        """
        path = Path(path)

        if path.is_dir():
            path = path / SCHEDULE_FILE

        with path.open(encoding="utf-8") as file:
            try:
                return cls.from_dict(json.load(file))
            except (KeyError, ValueError) as e:
                msg = f"Run file {path} is not a valid run record: {e}"
                raise NetworkFileError(msg) from e

    def write(self, output_dir: str | Path) -> None:
        """
        Write the schedule and all tables derived from it.

        Parameters
        ----------
        output_dir
            The directory to write to. Created if needed.
        """
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)

        with (output_dir / SCHEDULE_FILE).open("w", encoding="utf-8") as file:
            json.dump(self.to_dict(), file, indent=2)
            file.write("\n")

        format_usd(cost_table(self)).to_csv(output_dir / "costs.csv", index=False)
        voltage_table(self).to_csv(output_dir / "voltages.csv", index=False)
        current_table(self).to_csv(output_dir / "currents.csv", index=False)
        curtailment_table(self).to_csv(output_dir / "curtailment.csv", index=False)


def cost_table(record: RunRecord) -> pd.DataFrame:
    """
    Get the costs and purchased power of every event hour.

    Parameters
    ----------
    record
        The run.

    Returns
    -------
    ``pd.DataFrame``
        One row per hour.
    """
    return pd.DataFrame(
        [
            {
                "hour": hour.hour,
                "v_sub": round(hour.v_sub, 6),
                "price_usd_per_kwh": hour.price,
                "purchased_kw": None if hour.diverged else round(hour.purchased_kw, 3),
                "energy_cost_usd": hour.energy_cost_usd,
                "curtailment_cost_usd": hour.curtailment_cost_usd,
                "total_cost_usd": hour.total_cost_usd,
                "feasible": hour.feasible,
                "diverged": hour.diverged,
            }
            for hour in record.schedule.hours
        ]
    )


def voltage_table(record: RunRecord) -> pd.DataFrame:
    """
    Get the voltage of every bus, at the selected hours that are part of the event.

    Parameters
    ----------
    record
        The run.

    Returns
    -------
    ``pd.DataFrame``
        One row per hour and bus, the substation included.
    """
    rows = []

    for hour in record.schedule.hours:
        if hour.hour not in record.voltage_hours or hour.flow is None:
            continue

        rows.append(
            {
                "hour": hour.hour,
                "bus": record.substation,
                "v_pu": hour.v_sub,
                "ang_deg": 0.0,
            }
        )
        rows.extend(
            {
                "hour": hour.hour,
                "bus": bus,
                "v_pu": float(np.abs(v)),
                "ang_deg": float(np.degrees(np.angle(v))),
            }
            for bus, v in zip(hour.flow.bus_ids, hour.flow.bus_voltages, strict=True)
        )

    frame = pd.DataFrame(rows, columns=["hour", "bus", "v_pu", "ang_deg"])

    return frame.round({"v_pu": 6, "ang_deg": 4})


def current_table(record: RunRecord) -> pd.DataFrame:
    """
    Get the current and rating of every branch, at every event hour.

    Parameters
    ----------
    record
        The run.

    Returns
    -------
    ``pd.DataFrame``
        One row per hour and branch.
    """
    hops = record.hop_map
    rows = []

    for hour in record.schedule.hours:
        if hour.flow is None:
            continue

        currents = hour.flow.section_currents_a
        rows.extend(
            {
                "hour": hour.hour,
                "branch": branch,
                "hops": hops[branch],
                "current_a": float(current),
                "rating_a": float(rating),
                "loading": float(current / rating) if rating > 0 else np.inf,
            }
            for branch, current, rating in zip(
                hour.flow.section_ids, currents, hour.ratings, strict=True
            )
        )

    frame = pd.DataFrame(
        rows, columns=["hour", "branch", "hops", "current_a", "rating_a", "loading"]
    )

    return frame.round({"current_a": 3, "rating_a": 3, "loading": 6})


def curtailment_table(record: RunRecord) -> pd.DataFrame:
    """
    Get the curtailment of every curtailed load, at every event hour.

    Parameters
    ----------
    record
        The run.

    Returns
    -------
    ``pd.DataFrame``
        One row per hour and curtailed load.
    """
    rows = [
        {"hour": hour.hour, "bus": bus, "chi": float(chi), "curtailed_kw": float(kw)}
        for hour in record.schedule.hours
        for bus, chi, kw in zip(
            hour.load_buses, hour.chi, hour.curtailed_kw, strict=True
        )
        if chi > 0
    ]

    frame = pd.DataFrame(rows, columns=["hour", "bus", "chi", "curtailed_kw"])

    return frame.round({"chi": 6, "curtailed_kw": 3})


def run_case(config: ScenarioConfig) -> RunRecord:
    """
    Optimize one case, and write its schedule and tables to the output directory.

    Parameters
    ----------
    config
        The scenario.

    Returns
    -------
    ``RunRecord``
        The run. Check ``record.schedule.feasible`` for infeasible hours.
    """
    inputs = load_inputs(config)
    event = config.settings.event_spec(inputs.prices)

    schedule = optimize_event(
        event,
        inputs.network,
        inputs.bibc,
        inputs.upsilon,
        inputs.loads,
        config.settings.swarm,
        weather=inputs.weather,
    )

    hops = inputs.network.branch_hops
    record = RunRecord(
        schedule=schedule,
        fingerprint=inputs.fingerprint,
        seed=config.seed,
        demand_factor=config.demand_factor,
        voltage_hours=tuple(config.settings.voltage_hours),
        branch_ids=tuple(branch.id for branch in inputs.network.branches),
        branch_hops=tuple(hops[branch.id] for branch in inputs.network.branches),
        substation=inputs.network.substation.id,
    )

    record.write(config.output_dir)

    logger.info(
        "Case %s: total cost %.2f USD over %d hours, written to %s.",
        schedule.case_mode.value,
        schedule.total_cost_usd,
        len(schedule.hours),
        config.output_dir,
    )

    return record
