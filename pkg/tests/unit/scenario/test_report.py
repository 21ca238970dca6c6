from dataclasses import replace

import pandas as pd
import pytest

from gridpeak.exceptions import IncompatibleRunsError
from gridpeak.optimize import CaseMode
from gridpeak.scenario import compare_cases, current_change_map, current_table, run_case
from tests.conftest import make_scenario


# Arrange
@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    output_dir = tmp_path_factory.mktemp("cases")
    config = make_scenario(
        output_dir, swarm={"particle_count": 20, "max_iterations": 40, "seed": 3}
    )

    return {
        case: run_case(config.for_case(case, output_dir / case.value))
        for case in (CaseMode.STATIC, CaseMode.CVR)
    }


class TestCompareCases:
    def test_summary(self, runs):
        # Act
        report = compare_cases(runs)
        summary = report.summary()

        # Assert
        assert report.cases == [CaseMode.STATIC, CaseMode.CVR]
        assert list(summary["case"]) == ["static", "cvr"]
        assert summary["reduction_pct"][0] == 0
        static = report.total_costs[CaseMode.STATIC]
        cvr = report.total_costs[CaseMode.CVR]
        assert cvr < static
        reduction = 100 * (1 - cvr / static)
        assert report.reductions[CaseMode.CVR] == pytest.approx(reduction)

    def test_hourly(self, runs):
        # Act
        table = compare_cases(runs).hourly("purchased_kw")

        # Assert
        assert list(table.columns) == ["hour", "static", "cvr"]
        assert list(table["hour"]) == [17, 18]

    def test_curtailment_by_bus(self, runs):
        # Act
        table = compare_cases(runs).curtailment_by_bus()

        # Assert
        static = table[table["case"] == "static"]
        assert static["curtailed_kwh"].sum() == pytest.approx(
            runs[CaseMode.STATIC].schedule.curtailed_kwh, abs=1e-2
        )

    def test_write(self, runs, tmp_path):
        # Act
        compare_cases(runs).write(tmp_path)

        # Assert
        for name in (
            "comparison.csv",
            "purchased_power.csv",
            "curtailment_totals.csv",
            "voltages.csv",
            "currents.csv",
            "current_change_cvr.csv",
        ):
            assert (tmp_path / name).is_file()

        assert not (tmp_path / "current_change_static.csv").exists()

    def test_missing_static(self, runs):
        # Act & Assert
        with pytest.raises(IncompatibleRunsError, match="static case"):
            compare_cases({CaseMode.CVR: runs[CaseMode.CVR]})

    def test_different_inputs(self, runs):
        # Arrange
        other = replace(runs[CaseMode.CVR], fingerprint="0" * 64)

        # Act & Assert
        with pytest.raises(IncompatibleRunsError, match="different inputs"):
            compare_cases({CaseMode.STATIC: runs[CaseMode.STATIC], CaseMode.CVR: other})


class TestCurrentChangeMap:
    def test_matches_currents(self, runs):
        # Arrange
        case = current_table(runs[CaseMode.CVR]).set_index(["hour", "branch"])
        baseline = current_table(runs[CaseMode.STATIC]).set_index(["hour", "branch"])
        change = (case["current_a"] - baseline["current_a"]) / baseline["current_a"]
        expected = change.groupby("branch").mean()

        # Act
        table = current_change_map(runs[CaseMode.CVR], runs[CaseMode.STATIC])

        # Assert
        assert list(table["branch"]) == [1, 2, 3, 4]
        assert list(table["hops"]) == [1, 2, 3, 2]
        for row in table.itertuples():
            assert row.change == pytest.approx(expected[row.branch], abs=1e-5)
            assert row.abs_change == pytest.approx(abs(row.change), abs=1e-6)

    def test_self_comparison(self, runs):
        # Act
        table = current_change_map(runs[CaseMode.STATIC], runs[CaseMode.STATIC])

        # Assert
        assert (table["change"] == 0).all()
        pd.testing.assert_series_equal(
            table["case_a"], table["baseline_a"], check_names=False
        )

    def test_different_networks(self, runs):
        # Arrange
        other = replace(runs[CaseMode.CVR], branch_ids=(4, 3, 2, 1))

        # Act & Assert
        with pytest.raises(IncompatibleRunsError, match="different networks"):
            current_change_map(other, runs[CaseMode.STATIC])
