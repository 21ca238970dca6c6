"""Comparing cases, and the current change per branch."""

import logging
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from gridpeak.exceptions import IncompatibleRunsError
from gridpeak.optimize import CaseMode
from gridpeak.scenario.config import ScenarioConfig
from gridpeak.scenario.runner import (
    RunRecord,
    cost_table,
    current_table,
    curtailment_table,
    format_usd,
    run_case,
    voltage_table,
)

logger = logging.getLogger(__name__)

CASE_ORDER = (CaseMode.STATIC, CaseMode.CVR, CaseMode.CVR_DTR)


def _check_compatible(runs: Mapping[CaseMode, RunRecord]) -> None:
    fingerprints = {run.fingerprint for run in runs.values()}

    if len(fingerprints) > 1:
        msg = (
            "Cannot compare runs with different inputs (network, weather, prices, "
            "demand factor or event hours)."
        )
        raise IncompatibleRunsError(msg)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Costs, purchased power, curtailment, voltages and currents of several cases."""

    runs: dict[CaseMode, RunRecord]
    """The compared runs, by case."""

    @property
    def cases(self) -> list[CaseMode]:
        """The compared cases, in canonical order."""
        return [case for case in CASE_ORDER if case in self.runs]

    @property
    def total_costs(self) -> dict[CaseMode, float]:
        """The total cost of every case."""
        return {case: self.runs[case].schedule.total_cost_usd for case in self.cases}

    @property
    def reductions(self) -> dict[CaseMode, float]:
        """The cost reduction of every case relative to the static case, in percent."""
        baseline = self.total_costs[CaseMode.STATIC]

        return {
            case: (100 * (baseline - cost) / baseline if baseline > 0 else 0.0)
            for case, cost in self.total_costs.items()
        }

    def summary(self) -> pd.DataFrame:
        """
        Get the total cost, reduction and curtailed energy of every case.

        Returns
        -------
        ``pd.DataFrame``
            One row per case.
        """
        return pd.DataFrame(
            [
                {
                    "case": case.value,
                    "total_cost_usd": self.total_costs[case],
                    "reduction_pct": round(self.reductions[case], 4),
                    "curtailed_kwh": round(self.runs[case].schedule.curtailed_kwh, 3),
                    "infeasible_hours": len(self.runs[case].schedule.infeasible_hours),
                    "diverged_hours": len(self.runs[case].schedule.diverged_hours),
                }
                for case in self.cases
            ]
        )

    def hourly(self, column: str) -> pd.DataFrame:
        """
        Get one column of the cost table of every case, side by side.

        Parameters
        ----------
        column
            The column, e.g. ``purchased_kw`` or ``total_cost_usd``.

        Returns
        -------
        ``pd.DataFrame``
            One row per hour, one column per case.
        """
        frame = pd.DataFrame(
            {
                case.value: cost_table(self.runs[case]).set_index("hour")[column]
                for case in self.cases
            }
        )
        frame.index.name = "hour"

        return frame.reset_index()

    def curtailment_by_bus(self) -> pd.DataFrame:
        """
        Get the curtailed energy of every bus over the event, for every case.

        Returns
        -------
        ``pd.DataFrame``
            One row per case and curtailed bus.
        """
        frames = []

        for case in self.cases:
            table = curtailment_table(self.runs[case])
            totals = table.groupby("bus", as_index=False)["curtailed_kw"].sum()
            totals = totals.rename(columns={"curtailed_kw": "curtailed_kwh"})
            totals.insert(0, "case", case.value)
            frames.append(totals)

        frame = pd.concat(frames, ignore_index=True)

        return frame.round({"curtailed_kwh": 3})

    def voltages(self) -> pd.DataFrame:
        """
        Get the per-bus voltages at the selected hours, for every case.

        Returns
        -------
        ``pd.DataFrame``
            One row per case, hour and bus.
        """
        frames = []

        for case in self.cases:
            table = voltage_table(self.runs[case])
            table.insert(0, "case", case.value)
            frames.append(table)

        return pd.concat(frames, ignore_index=True)

    def currents(self) -> pd.DataFrame:
        """
        Get the per-branch currents at every event hour, for every case.

        Returns
        -------
        ``pd.DataFrame``
            One row per case, hour and branch.
        """
        frames = []

        for case in self.cases:
            table = current_table(self.runs[case])
            table.insert(0, "case", case.value)
            frames.append(table)

        return pd.concat(frames, ignore_index=True)

    def write(self, output_dir: str | Path) -> None:
        """
        Write the comparison tables.

        Parameters
        ----------
        output_dir
            The directory to write to.
        """
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)

        format_usd(self.summary()).to_csv(output_dir / "comparison.csv", index=False)
        self.hourly("purchased_kw").to_csv(
            output_dir / "purchased_power.csv", index=False
        )
        self.curtailment_by_bus().to_csv(
            output_dir / "curtailment_totals.csv", index=False
        )
        self.voltages().to_csv(output_dir / "voltages.csv", index=False)
        self.currents().to_csv(output_dir / "currents.csv", index=False)

        for case in self.cases:
            if case == CaseMode.STATIC:
                continue

            current_change_map(self.runs[case], self.runs[CaseMode.STATIC]).to_csv(
                output_dir / f"current_change_{case.value}.csv", index=False
            )


def compare_cases(runs: Mapping[CaseMode, RunRecord]) -> ComparisonReport:
    """
    Compare runs of different cases on the same inputs.

    Parameters
    ----------
    runs
        The runs, by case. Must include the static case, as the baseline.

    Returns
    -------
    ``ComparisonReport``
        The comparison.

    Raises
    ------
    IncompatibleRunsError
        If the runs do not share their inputs, or the static case is missing.
    """
    if CaseMode.STATIC not in runs:
        msg = "Comparing cases requires the static case as baseline."
        raise IncompatibleRunsError(msg)

    _check_compatible(runs)

    report = ComparisonReport(runs=dict(runs))

    for case, reduction in report.reductions.items():
        logger.info("Case %s: cost reduction %.2f%%.", case.value, reduction)

    return report


def run_comparison(
    config: ScenarioConfig, output_dir: str | Path, workers: int = 1
) -> ComparisonReport:
    """
    Run all three cases on the same inputs, and compare them.

    Every case writes to its own subdirectory of the output directory.

    Parameters
    ----------
    config
        The scenario. Its case mode and output directory are replaced per case.
    output_dir
        The directory to write to.
    workers
        The number of cases to run concurrently.

    Returns
    -------
    ``ComparisonReport``
        The comparison.
    """
    output_dir = Path(output_dir)
    configs = [config.for_case(case, output_dir / case.value) for case in CASE_ORDER]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(run_case, configs))
    else:
        records = [run_case(case_config) for case_config in configs]

    report = compare_cases(dict(zip(CASE_ORDER, records, strict=True)))
    report.write(output_dir)

    return report


def current_change_map(run: RunRecord, baseline: RunRecord) -> pd.DataFrame:
    """
    Get the relative change of every branch current, compared to a baseline run.

    The change ``(I - I_baseline) / I_baseline`` is averaged over the event hours both
    runs share.

    Parameters
    ----------
    run
        The run, e.g. with voltage reduction.
    baseline
        The baseline run.

    Returns
    -------
    ``pd.DataFrame``
        One row per branch with its hop count, the mean currents, the signed relative
        change and its magnitude.

    Raises
    ------
    IncompatibleRunsError
        If the runs have different networks.
    """
    if run.branch_ids != baseline.branch_ids:
        msg = "Cannot compare currents of runs with different networks."
        raise IncompatibleRunsError(msg)

    merged = current_table(run).merge(
        current_table(baseline),
        on=["hour", "branch", "hops"],
        suffixes=("", "_baseline"),
    )

    case_a = merged["current_a"].to_numpy()
    baseline_a = merged["current_a_baseline"].to_numpy()

    merged["change"] = np.divide(
        case_a - baseline_a,
        baseline_a,
        out=np.zeros(len(merged)),
        where=baseline_a > 0,
    )

    frame = merged.groupby(["branch", "hops"], as_index=False, sort=False).agg(
        baseline_a=("current_a_baseline", "mean"),
        case_a=("current_a", "mean"),
        change=("change", "mean"),
    )
    frame["abs_change"] = frame["change"].abs()

    return frame.round({"baseline_a": 3, "case_a": 3, "change": 6, "abs_change": 6})
