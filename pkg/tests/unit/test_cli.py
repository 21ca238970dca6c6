import pytest
from click.testing import CliRunner

from gridpeak.cli import EXIT_INFEASIBLE, EXIT_INPUT_ERROR, cli
from gridpeak.scenario import resource_path
from tests.conftest import TEST_DATA_DIR

FEEDER5 = str(resource_path("feeder5.json"))
SMALL_SWARM = ["--particles", "8", "--iterations", "5", "--seed", "1"]


def sweep_args(factors, output_dir):
    return [
        "sweep", "--network", FEEDER5, "--factors", factors, "--out", str(output_dir)
    ]


# Arrange
@pytest.fixture
def runner():
    return CliRunner()


class TestCli:
    def test_help(self, runner):
        # Act
        result = runner.invoke(cli, ["--help"])

        # Assert
        assert result.exit_code == 0

        for command in ("run", "compare", "sweep", "currents"):
            assert command in result.output

    def test_unknown_log_level(self, runner, tmp_path):
        # Arrange
        args = ["--log-level", "LOUD", "sweep", "--out", str(tmp_path)]

        # Act
        result = runner.invoke(cli, args)

        # Assert
        assert result.exit_code != 0
        assert isinstance(result.exception, ValueError)


class TestRun:
    def test_run(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "run",
                "--network",
                FEEDER5,
                "--case",
                "static",
                "--hours",
                "17-18",
                *SMALL_SWARM,
                "--out",
                str(tmp_path),
            ],
        )

        # Assert
        assert result.exit_code == 0, result.output
        assert "static: total cost" in result.output
        assert (tmp_path / "schedule.json").is_file()

    def test_config_file(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "run",
                "--network",
                FEEDER5,
                "--config",
                str(TEST_DATA_DIR / "run_config_small.json"),
                "--hours",
                "17",
                "--out",
                str(tmp_path),
            ],
        )

        # Assert
        assert result.exit_code == 0, result.output
        assert "cvr: total cost" in result.output

    def test_missing_network(self, runner, tmp_path):
        # Arrange
        missing = str(tmp_path / "missing.json")
        args = ["run", "--network", missing, "--out", str(tmp_path)]

        # Act
        result = runner.invoke(cli, args)

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "Error:" in result.output

    def test_invalid_network(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "run",
                "--network",
                str(TEST_DATA_DIR / "network_cycle.json"),
                "--out",
                str(tmp_path),
            ],
        )

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "radial" in result.output

    def test_unknown_config_key(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "run",
                "--config",
                str(TEST_DATA_DIR / "run_config_unknown_key.json"),
                "--out",
                str(tmp_path),
            ],
        )

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "event_hourz" in result.output

    def test_malformed_hours(self, runner, tmp_path):
        # Arrange
        args = ["run", "--network", FEEDER5, "--hours", "ten", "--out", str(tmp_path)]

        # Act
        result = runner.invoke(cli, args)

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "malformed hours" in result.output

    def test_infeasible(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "run",
                "--network",
                FEEDER5,
                "--case",
                "static",
                "--hours",
                "17",
                "--demand-factor",
                "1.6",
                *SMALL_SWARM,
                "--out",
                str(tmp_path),
            ],
        )

        # Assert
        assert result.exit_code == EXIT_INFEASIBLE
        assert "Infeasible hours: [17]" in result.output
        assert (tmp_path / "schedule.json").is_file()


class TestSweep:
    def test_sweep(self, runner, tmp_path):
        # Act
        result = runner.invoke(cli, sweep_args("0.5,0.9", tmp_path))

        # Assert
        assert result.exit_code == 0, result.output
        assert (tmp_path / "sweep.csv").is_file()

    def test_sweep_infeasible(self, runner, tmp_path):
        # Act
        result = runner.invoke(cli, sweep_args("0.5,1.5", tmp_path))

        # Assert
        assert result.exit_code == EXIT_INFEASIBLE

    def test_sweep_unordered(self, runner, tmp_path):
        # Act
        result = runner.invoke(cli, sweep_args("0.9,0.5", tmp_path))

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "ascending order" in result.output

    def test_sweep_malformed_factors(self, runner, tmp_path):
        # Act
        result = runner.invoke(cli, sweep_args("0.5,high", tmp_path))

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "malformed numbers" in result.output


class TestCurrents:
    def test_missing_runs(self, runner, tmp_path):
        # Act
        result = runner.invoke(
            cli,
            [
                "currents",
                "--baseline",
                str(tmp_path / "static"),
                "--case",
                str(tmp_path / "cvr"),
            ],
        )

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_corrupt_run(self, runner, tmp_path):
        # Arrange
        for case in ("static", "cvr"):
            (tmp_path / case).mkdir()
            (tmp_path / case / "schedule.json").write_text("{}", encoding="utf-8")

        # Act
        result = runner.invoke(
            cli,
            [
                "currents",
                "--baseline",
                str(tmp_path / "static"),
                "--case",
                str(tmp_path / "cvr"),
            ],
        )

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "not a valid run record" in result.output
