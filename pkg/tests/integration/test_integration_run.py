import filecmp

import pytest

from gridpeak.optimize import CaseMode
from gridpeak.scenario import run_case, run_comparison
from tests.conftest import make_scenario

SWARM = {"particle_count": 12, "max_iterations": 20, "seed": 5}


class TestIntegrationRun:
    @pytest.mark.parametrize("case_mode", ["static", "cvr", "cvr_dtr"])
    def test_deterministic(self, tmp_path, case_mode):
        # Arrange
        config = make_scenario(
            tmp_path / "first",
            case_mode=case_mode,
            event_hours=[17, 18, 19],
            swarm=SWARM,
        )

        # Act
        run_case(config)
        run_case(config.for_case(CaseMode.parse(case_mode), tmp_path / "second"))

        # Assert
        for name in ("costs.csv", "voltages.csv", "currents.csv", "curtailment.csv"):
            assert filecmp.cmp(
                tmp_path / "first" / name, tmp_path / "second" / name, shallow=False
            )

    def test_workers(self, tmp_path):
        # Arrange
        serial = make_scenario(tmp_path / "serial", case_mode="cvr", swarm=SWARM)
        threaded = make_scenario(
            tmp_path / "threaded", case_mode="cvr", swarm={**SWARM, "workers": 3}
        )

        # Act
        serial_schedule = run_case(serial).schedule
        threaded_schedule = run_case(threaded).schedule

        # Assert
        assert serial_schedule.total_cost_usd == threaded_schedule.total_cost_usd
        assert filecmp.cmp(
            tmp_path / "serial" / "costs.csv",
            tmp_path / "threaded" / "costs.csv",
            shallow=False,
        )

    def test_comparison(self, tmp_path):
        # Arrange
        config = make_scenario(tmp_path, swarm=SWARM)

        # Act
        report = run_comparison(config, tmp_path / "compare")

        # Assert
        assert report.cases == [CaseMode.STATIC, CaseMode.CVR, CaseMode.CVR_DTR]

        for case in report.cases:
            assert (tmp_path / "compare" / case.value / "schedule.json").is_file()
            assert report.runs[case].schedule.feasible

        assert (tmp_path / "compare" / "comparison.csv").is_file()
        assert (tmp_path / "compare" / "current_change_cvr_dtr.csv").is_file()

    def test_parallel_cases(self, tmp_path):
        # Arrange
        config = make_scenario(tmp_path, swarm=SWARM)

        # Act
        sequential = run_comparison(config, tmp_path / "sequential")
        parallel = run_comparison(config, tmp_path / "parallel", workers=3)

        # Assert
        assert sequential.total_costs == parallel.total_costs
        assert filecmp.cmp(
            tmp_path / "sequential" / "comparison.csv",
            tmp_path / "parallel" / "comparison.csv",
            shallow=False,
        )
