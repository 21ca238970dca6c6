from gridpeak.scenario import resource_path
from gridpeak.util import hour_window
from tests.conftest import make_scenario

EVENT_HOURS = hour_window(10, 21)


def feeder20_scenario(output_dir, weather="weather_cool_windy.csv", **settings):
    values = {
        "event_hours": EVENT_HOURS,
        "voltage_hours": [10, 14],
        "swarm": {"particle_count": 20, "max_iterations": 40, "seed": 0},
    }
    values.update(settings)
    config = make_scenario(output_dir, network="feeder20.json", **values)

    return config.model_copy(update={"weather_path": resource_path(weather)})
