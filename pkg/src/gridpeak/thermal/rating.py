"""Static and dynamic thermal ratings of network components."""

import logging
import math
import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import bisect

from gridpeak.exceptions import ZeroHeadroomWarning
from gridpeak.thermal.ladder import (
    REFERENCE_WEATHER,
    ThermalComponentState,
    ThermalLadderSpec,
    WeatherSample,
    equilibrium_state,
    simulate,
)

if TYPE_CHECKING:
    from gridpeak.grid import RadialNetwork

logger = logging.getLogger(__name__)

AMPACITY_TOLERANCE = 0.1
BISECTION_ITERATIONS = 20
RATING_SUBSTEP_S = 60.0
MAX_SEARCH_CURRENT = 1e5


class RatingMode(Enum):
    """How component ratings are determined."""

    STATIC = "static"
    """Fixed ratings, defined at worst-case weather."""

    DYNAMIC = "dynamic"
    """Hourly ratings from weather and thermal state."""


def _zero_headroom(spec: ThermalLadderSpec, weather: WeatherSample) -> bool:
    """
    Check for, and report, a component without thermal headroom.

    Returns
    -------
    ``bool``
        Whether the ambient temperature has reached the hot spot limit.
    """
    if weather.ambient_c < spec.hot_spot_limit:
        return False

    warnings.warn(
        f"Ambient temperature {weather.ambient_c:.1f} °C leaves no headroom below the "
        f"hot spot limit of {spec.hot_spot_limit:.1f} °C, ampacity is zero.",
        ZeroHeadroomWarning,
        stacklevel=3,
    )

    return True


def line_steady_ampacity(spec: ThermalLadderSpec, weather: WeatherSample) -> float:
    """
    Compute the steady ampacity of an overhead line from its heat balance.

    Finds the largest current for which ``q_gen + q_solar = q_conv + q_rad`` holds with
    the conductor at its hot spot limit.

    Parameters
    ----------
    spec
        The ladder parameters, including a heat balance.
    weather
        The weather conditions.

    Returns
    -------
    ``float``
        The ampacity, in A (to within 0.1 A).

    Raises
    ------
    ValueError
        If the component has no heat balance.
    """
    balance = spec.heat_balance

    if balance is None:
        msg = "Line ampacity requires a heat balance."
        raise ValueError(msg)

    if _zero_headroom(spec, weather):
        return 0.0

    limit = spec.hot_spot_limit
    resistance = spec.r0 * (1 + spec.alpha * (limit - spec.theta_ref))
    removal = (
        balance.convective(weather.wind_mps, weather.ambient_c, limit)
        + balance.radiative(weather.ambient_c, limit)
        - balance.solar(weather.solar_wm2)
    )

    if removal <= 0:
        warnings.warn(
            "Solar heating alone exceeds the heat removal at the hot spot limit, "
            "ampacity is zero.",
            ZeroHeadroomWarning,
            stacklevel=2,
        )
        return 0.0

    def excess_heat(current: float) -> float:
        return current**2 * resistance - removal

    upper = math.sqrt(removal / resistance) + 1.0

    return float(bisect(excess_heat, 0.0, upper, xtol=AMPACITY_TOLERANCE))


def ladder_steady_ampacity(spec: ThermalLadderSpec, weather: WeatherSample) -> float:
    """
    Compute the steady ampacity from the closed form ladder equilibrium.

    Parameters
    ----------
    spec
        The ladder parameters.
    weather
        The weather conditions.

    Returns
    -------
    ``float``
        The ampacity, in A.
    """
    if _zero_headroom(spec, weather):
        return 0.0

    resistances, rise = spec.effective_ladder(weather)
    gain = resistances[0].sum() + spec.hot_spot_gradient
    headroom = spec.hot_spot_limit - rise[0] - weather.ambient_c

    if headroom <= 0:
        return 0.0

    resistance = spec.r0 * (1 + spec.alpha * (spec.hot_spot_limit - spec.theta_ref))

    return math.sqrt(headroom / (gain * resistance))


def steady_ampacity(spec: ThermalLadderSpec, weather: WeatherSample) -> float:
    """
    Compute the steady ampacity of any component.

    Parameters
    ----------
    spec
        The ladder parameters.
    weather
        The weather conditions.

    Returns
    -------
    ``float``
        The ampacity, in A.
    """
    if spec.heat_balance is not None:
        return line_steady_ampacity(spec, weather)

    return ladder_steady_ampacity(spec, weather)


def calibrate_resistance(
    spec: ThermalLadderSpec,
    static_rating: float,
    weather: WeatherSample = REFERENCE_WEATHER,
) -> float:
    """
    Find the conductor resistance for which the steady ampacity equals a rating.

    Parameters
    ----------
    spec
        The ladder parameters. Its ``r0`` is ignored.
    static_rating
        The rating to reproduce, in A.
    weather
        The weather at which the rating applies.

    Returns
    -------
    ``float``
        The conductor resistance at the reference temperature.

    Raises
    ------
    ValueError
        If the weather leaves no thermal headroom.
    """
    resistances, rise = spec.effective_ladder(weather)
    gain = resistances[0].sum() + spec.hot_spot_gradient
    headroom = spec.hot_spot_limit - rise[0] - weather.ambient_c

    if headroom <= 0:
        msg = "Cannot calibrate a component without thermal headroom."
        raise ValueError(msg)

    return headroom / (
        gain
        * static_rating**2
        * (1 + spec.alpha * (spec.hot_spot_limit - spec.theta_ref))
    )


def dynamic_rating(
    spec: ThermalLadderSpec,
    state: ThermalComponentState,
    weather: WeatherSample,
    horizon: float = 1.0,
    step_s: float = RATING_SUBSTEP_S,
) -> float:
    """
    Compute the largest constant current that is thermally safe over a horizon.

    Simulates the ladder over the horizon and bisects on the current, so the hot spot
    stays at or below its limit throughout.

    Parameters
    ----------
    spec
        The ladder parameters.
    state
        The thermal state at the start of the horizon.
    weather
        The weather during the horizon.
    horizon
        The length of the horizon, in hours.
    step_s
        The simulation sub-step, in seconds.

    Returns
    -------
    ``float``
        The dynamic rating, in A.
    """
    if _zero_headroom(spec, weather):
        return 0.0

    def excess_temperature(current: float) -> float:
        _, peak = simulate(spec, state, current, weather, horizon, step_s)
        return peak - spec.hot_spot_limit

    if excess_temperature(0.0) > 0:
        warnings.warn(
            f"Component at {state.hot_spot:.1f} °C cannot stay below its hot spot "
            f"limit within {horizon} h, rating is zero.",
            ZeroHeadroomWarning,
            stacklevel=2,
        )
        return 0.0

    upper = max(steady_ampacity(spec, weather), 1.0)

    while excess_temperature(upper) <= 0:
        upper *= 2

        if upper > MAX_SEARCH_CURRENT:
            return MAX_SEARCH_CURRENT

    rating = bisect(
        excess_temperature,
        0.0,
        upper,
        xtol=AMPACITY_TOLERANCE,
        maxiter=BISECTION_ITERATIONS,
        disp=False,
    )

    if excess_temperature(rating) > 0:
        rating = max(rating - AMPACITY_TOLERANCE, 0.0)

    return float(rating)


@dataclass(frozen=True)
class RatingSchedule:
    """Ampacity of every branch, for every hour."""

    mode: RatingMode
    """How the ratings were determined."""

    hours: tuple[int, ...]
    """The hours covered, in order."""

    branch_ids: tuple[int, ...]
    """The branches covered, in network order."""

    ampacity: np.ndarray
    """The ratings in A, shaped ``(hours, branches)``."""

    def at(self, hour: int) -> np.ndarray:
        """
        Get the ratings of all branches at one hour.

        Parameters
        ----------
        hour
            The hour.

        Returns
        -------
        ``np.ndarray``
            The ratings in A, in network branch order.

        Raises
        ------
        KeyError
            If the hour is not covered by this schedule.
        """
        if hour not in self.hours:
            msg = f"Hour {hour} is not covered by this rating schedule."
            raise KeyError(msg)

        return self.ampacity[self.hours.index(hour)]


def _thermal_specs(network: "RadialNetwork") -> list[ThermalLadderSpec]:
    specs = []

    for branch in network.branches:
        if branch.thermal is None:
            msg = f"Branch {branch.id} has no thermal parameters."
            raise ValueError(msg)

        specs.append(branch.thermal)

    return specs


def static_ratings(network: "RadialNetwork") -> np.ndarray:
    """
    Get the static rating of every branch.

    Parameters
    ----------
    network
        The network.

    Returns
    -------
    ``np.ndarray``
        The ratings in A, in network branch order.
    """
    return np.array([branch.static_rating for branch in network.branches])


def equilibrium_states(
    network: "RadialNetwork",
    currents: Sequence[float],
    weather: WeatherSample,
    time: float = 0.0,
) -> list[ThermalComponentState]:
    """
    Get the equilibrium state of every branch for the given currents.

    Parameters
    ----------
    network
        The network.
    currents
        The current through each branch, in A.
    weather
        The weather conditions.
    time
        The time of the states, in hours.

    Returns
    -------
    ``list[ThermalComponentState]``
        The states, in network branch order.
    """
    return [
        equilibrium_state(spec, current, weather, time)
        for spec, current in zip(_thermal_specs(network), currents, strict=True)
    ]


def dynamic_ratings(
    network: "RadialNetwork",
    states: Sequence[ThermalComponentState],
    weather: WeatherSample,
) -> np.ndarray:
    """
    Get the dynamic rating of every branch for the coming hour.

    Parameters
    ----------
    network
        The network.
    states
        The thermal state of every branch at the start of the hour.
    weather
        The weather during the hour.

    Returns
    -------
    ``np.ndarray``
        The ratings in A, in network branch order.
    """
    return np.array(
        [
            dynamic_rating(spec, state, weather)
            for spec, state in zip(_thermal_specs(network), states, strict=True)
        ]
    )


def advance_states(
    network: "RadialNetwork",
    states: Sequence[ThermalComponentState],
    currents: Sequence[float],
    weather: WeatherSample,
    duration: float = 1.0,
) -> list[ThermalComponentState]:
    """
    Advance the thermal state of every branch with the currents it carried.

    Parameters
    ----------
    network
        The network.
    states
        The thermal state of every branch at the start of the period.
    currents
        The current through each branch during the period, in A.
    weather
        The weather during the period.
    duration
        The length of the period, in hours.

    Returns
    -------
    ``list[ThermalComponentState]``
        The states at the end of the period.
    """
    return [
        simulate(spec, state, current, weather, duration, RATING_SUBSTEP_S)[0]
        for spec, state, current in zip(
            _thermal_specs(network), states, currents, strict=True
        )
    ]


def rating_schedule(
    network: "RadialNetwork",
    weather: Mapping[int, WeatherSample],
    hours: Sequence[int],
    mode: RatingMode,
    initial_states: Sequence[ThermalComponentState] | None = None,
    currents: Mapping[int, Sequence[float]] | None = None,
) -> RatingSchedule:
    """
    Compute the ratings of all branches over a sequence of hours.

    In dynamic mode, the thermal states are chained from hour to hour. They advance
    with the given currents, or with the rating current itself when no currents are
    provided.

    Parameters
    ----------
    network
        The network.
    weather
        The weather, by hour.
    hours
        The hours to compute ratings for, in order.
    mode
        Static or dynamic ratings.
    initial_states
        The thermal states at the start of the first hour. Defaults to every branch
        at ambient temperature.
    currents
        The currents carried in each hour, by hour.

    Returns
    -------
    ``RatingSchedule``
        The ratings for every hour.

    Raises
    ------
    ValueError
        If weather is missing for any of the hours.
    """
    missing = [hour for hour in hours if hour not in weather]

    if missing:
        msg = f"No weather available for hours {missing}."
        raise ValueError(msg)

    branch_ids = tuple(branch.id for branch in network.branches)

    if mode == RatingMode.STATIC:
        ampacity = np.tile(static_ratings(network), (len(hours), 1))

        return RatingSchedule(mode, tuple(hours), branch_ids, ampacity)

    states = list(
        initial_states
        or [
            ThermalComponentState.at_ambient(spec, weather[hours[0]])
            for spec in _thermal_specs(network)
        ]
    )

    rows = []

    for hour in hours:
        ratings = dynamic_ratings(network, states, weather[hour])
        rows.append(ratings)

        carried = ratings if currents is None else np.asarray(currents[hour])
        states = advance_states(network, states, carried, weather[hour])

        logger.debug("Dynamic ratings for hour %d: %s", hour, np.round(ratings, 1))

    return RatingSchedule(mode, tuple(hours), branch_ids, np.array(rows))
