"""Thermal models and (dynamic) thermal ratings of network components."""

from .ladder import (
    REFERENCE_WEATHER,
    LineHeatBalance,
    ThermalComponentState,
    ThermalLadderSpec,
    WeatherSample,
    equilibrium_state,
    ladder_step,
    simulate,
    steady_temperature,
)
from .rating import (
    RatingMode,
    RatingSchedule,
    advance_states,
    calibrate_resistance,
    dynamic_rating,
    dynamic_ratings,
    equilibrium_states,
    ladder_steady_ampacity,
    line_steady_ampacity,
    rating_schedule,
    static_ratings,
    steady_ampacity,
)
from .weather import read_weather

__all__ = [
    "REFERENCE_WEATHER",
    "LineHeatBalance",
    "ThermalComponentState",
    "ThermalLadderSpec",
    "WeatherSample",
    "equilibrium_state",
    "ladder_step",
    "simulate",
    "steady_temperature",
    "RatingMode",
    "RatingSchedule",
    "advance_states",
    "calibrate_resistance",
    "dynamic_rating",
    "dynamic_ratings",
    "equilibrium_states",
    "ladder_steady_ampacity",
    "line_steady_ampacity",
    "rating_schedule",
    "static_ratings",
    "steady_ampacity",
    "read_weather",
]
