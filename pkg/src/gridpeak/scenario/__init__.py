"""Scenario runs: single cases, case comparisons and demand factor sweeps."""

from .config import (
    DEFAULT_EVENT_HOURS,
    DEFAULT_VOLTAGE_HOURS,
    RunSettings,
    ScenarioConfig,
    resource_path,
)
from .inputs import ScenarioInputs, input_fingerprint, load_inputs, read_prices
from .report import ComparisonReport, compare_cases, current_change_map, run_comparison
from .runner import (
    RunRecord,
    cost_table,
    current_table,
    curtailment_table,
    run_case,
    voltage_table,
)
from .sweep import DEFAULT_SWEEP_HOUR, SweepProblem, demand_factor_sweep, sweep_problem

__all__ = [
    "DEFAULT_EVENT_HOURS",
    "DEFAULT_VOLTAGE_HOURS",
    "RunSettings",
    "ScenarioConfig",
    "resource_path",
    "ScenarioInputs",
    "input_fingerprint",
    "load_inputs",
    "read_prices",
    "ComparisonReport",
    "compare_cases",
    "current_change_map",
    "run_comparison",
    "RunRecord",
    "cost_table",
    "current_table",
    "curtailment_table",
    "run_case",
    "voltage_table",
    "DEFAULT_SWEEP_HOUR",
    "SweepProblem",
    "demand_factor_sweep",
    "sweep_problem",
]
