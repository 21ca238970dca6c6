import pytest

from gridpeak.exceptions import NetworkFileError
from gridpeak.scenario import resource_path
from gridpeak.thermal import WeatherSample, read_weather
from tests.conftest import TEST_DATA_DIR


class TestReadWeather:
    def test_read_weather(self):
        # Act
        weather = read_weather(resource_path("weather_hot_still.csv"))

        # Assert
        assert sorted(weather) == list(range(24))
        assert weather[14] == WeatherSample(
            ambient_c=42.0, wind_mps=0.3, solar_wm2=980.0, hour=14
        )

    def test_missing_column(self):
        # Act & Assert
        with pytest.raises(NetworkFileError, match="lacks the columns"):
            read_weather(TEST_DATA_DIR / "weather_missing_column.csv")

    def test_duplicate_hours(self, tmp_path):
        # Arrange
        path = tmp_path / "weather.csv"
        path.write_text("hour,ambient_c,wind_mps,solar_wm2\n10,20,1,0\n10,21,1,0\n")

        # Act & Assert
        with pytest.raises(NetworkFileError, match="duplicate hours"):
            read_weather(path)

    def test_invalid_values(self, tmp_path):
        # Arrange
        path = tmp_path / "weather.csv"
        path.write_text("hour,ambient_c,wind_mps,solar_wm2\n10,20,-1,0\n")

        # Act & Assert
        with pytest.raises(NetworkFileError, match="invalid values"):
            read_weather(path)
