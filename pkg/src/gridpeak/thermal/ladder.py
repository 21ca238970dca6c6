"""Ladder thermal model of network components."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

STEFAN_BOLTZMANN = 5.670374419e-8
KELVIN = 273.15
SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class WeatherSample:
    """Weather conditions during one hour."""

    ambient_c: float
    """The ambient temperature, in degrees Celsius."""

    wind_mps: float = 0.0
    """The wind speed, in m/s."""

    solar_wm2: float = 0.0
    """The solar irradiation, in W/m²."""

    hour: int = 0
    """The hour of the day (0-23)."""

    def __post_init__(self) -> None:
        """
        Validate the weather sample.

        Raises
        ------
        ValueError
            If the wind speed or solar irradiation is negative.
        """
        if self.wind_mps < 0 or self.solar_wm2 < 0:
            msg = (
                f"Wind speed and solar irradiation must be non-negative "
                f"(got wind={self.wind_mps}, solar={self.solar_wm2})."
            )
            raise ValueError(msg)


REFERENCE_WEATHER = WeatherSample(ambient_c=40.0, wind_mps=0.61, solar_wm2=1000.0)
"""Worst-case weather at which static ratings are defined."""


@dataclass(frozen=True)
class LineHeatBalance:
    """Steady heat balance parameters of a bare overhead conductor, per meter."""

    diameter_m: float = 0.0185
    """The conductor diameter."""

    conv_a: float = 0.25
    """Still-air part of the convective coefficient, in W/(m·K)."""

    conv_b: float = 0.6
    """Wind dependent part of the convective coefficient, in W/(m·K·√(m/s))."""

    emissivity: float = 0.5
    """The conductor surface emissivity."""

    absorptivity: float = 0.5
    """The conductor solar absorptivity."""

    def convective(
        self, wind_mps: float, ambient_c: float, conductor_c: float
    ) -> float:
        """
        Compute the convective heat loss ``h(w)·(T_c - θ_amb)``.

        Parameters
        ----------
        wind_mps
            The wind speed.
        ambient_c
            The ambient temperature.
        conductor_c
            The conductor temperature.

        Returns
        -------
        ``float``
            The convective heat loss, in W/m.
        """
        return (self.conv_a + self.conv_b * math.sqrt(wind_mps)) * (
            conductor_c - ambient_c
        )

    def radiative(self, ambient_c: float, conductor_c: float) -> float:
        """
        Compute the radiative heat loss of the conductor surface.

        Parameters
        ----------
        ambient_c
            The ambient temperature.
        conductor_c
            The conductor temperature.

        Returns
        -------
        ``float``
            The radiative heat loss, in W/m.
        """
        return (
            self.emissivity
            * STEFAN_BOLTZMANN
            * math.pi
            * self.diameter_m
            * ((conductor_c + KELVIN) ** 4 - (ambient_c + KELVIN) ** 4)
        )

    def solar(self, solar_wm2: float) -> float:
        """
        Compute the solar heat gain ``α_s·φ·D``.

        Parameters
        ----------
        solar_wm2
            The solar irradiation.

        Returns
        -------
        ``float``
            The solar heat gain, in W/m.
        """
        return self.absorptivity * solar_wm2 * self.diameter_m

    def conductance(self, weather: WeatherSample, conductor_c: float) -> float:
        """
        Compute the heat removal per kelvin of conductor rise.

        The radiative part is linearized as a secant between ambient and the given
        conductor temperature, so the balance is exact at that temperature.

        Parameters
        ----------
        weather
            The weather conditions.
        conductor_c
            The conductor temperature to linearize at.

        Returns
        -------
        ``float``
            The thermal conductance to ambient, in W/(m·K).
        """
        rise = conductor_c - weather.ambient_c

        if abs(rise) > 1e-6:
            radiative = self.radiative(weather.ambient_c, conductor_c) / rise
        else:
            radiative = (
                4
                * self.emissivity
                * STEFAN_BOLTZMANN
                * math.pi
                * self.diameter_m
                * (conductor_c + KELVIN) ** 3
            )

        return self.conv_a + self.conv_b * math.sqrt(weather.wind_mps) + radiative


@dataclass(frozen=True)
class ThermalLadderSpec:
    """
    Parameters of the ladder thermal circuit of one component.

    Node 0 is the conductor, i.e. the hot spot. Every node ``j`` and loop ``k`` pair
    carries its own exponential rise, driven by the conductor loss ``W_c``.
    """

    time_constants: tuple[float, ...]
    """Time constant of each ladder loop, in hours."""

    loop_resistances: tuple[tuple[float, ...], ...]
    """Control parameters ``T[j][k]``, per node and loop, in K/W."""

    hot_spot_limit: float = 90.0
    """The thermal limit of the hot spot, in degrees Celsius."""

    dielectric_rise: tuple[float, ...] = ()
    """Constant rise of each node due to dielectric losses. Empty means zero."""

    r0: float = 1.0
    """Conductor resistance at the reference temperature."""

    alpha: float = 0.00403
    """Temperature coefficient of the conductor resistance, in 1/K."""

    theta_ref: float = 20.0
    """Reference temperature of ``r0``."""

    hot_spot_gradient: float = 0.0
    """Instantaneous hot-spot rise per watt of conductor loss, in K/W."""

    heat_balance: LineHeatBalance | None = None
    """Weather dependent heat balance, for overhead lines."""

    def __post_init__(self) -> None:
        """
        Validate the ladder parameters.

        Raises
        ------
        ValueError
            If any of the ladder parameters is invalid.
        """
        if len(self.loop_resistances) < 1:
            msg = "A thermal ladder needs at least one node."
            raise ValueError(msg)

        if any(tau <= 0 for tau in self.time_constants):
            msg = f"Time constants must be positive (got {self.time_constants})."
            raise ValueError(msg)

        if any(len(row) != len(self.time_constants) for row in self.loop_resistances):
            msg = "Every ladder node needs one control parameter per loop."
            raise ValueError(msg)

        if self.hot_spot_limit <= 0:
            msg = f"Hot spot limit must be positive (got {self.hot_spot_limit})."
            raise ValueError(msg)

        if self.dielectric_rise and len(self.dielectric_rise) != self.node_count:
            msg = "Please provide one dielectric rise per ladder node."
            raise ValueError(msg)

        if self.heat_balance is not None and (
            self.node_count != 1 or self.loop_count != 1
        ):
            msg = "A heat balance can only be combined with a single loop ladder."
            raise ValueError(msg)

    @property
    def node_count(self) -> int:
        """The number of ladder nodes."""
        return len(self.loop_resistances)

    @property
    def loop_count(self) -> int:
        """The number of ladder loops."""
        return len(self.time_constants)

    def conductor_loss(self, current: float, conductor_c: float) -> float:
        """
        Compute the conductor loss ``W_c = I²·R₀·(1 + α·(θ_c - θ_ref))``.

        Parameters
        ----------
        current
            The current, in A.
        conductor_c
            The conductor temperature.

        Returns
        -------
        ``float``
            The conductor loss.
        """
        return current**2 * self.r0 * (1 + self.alpha * (conductor_c - self.theta_ref))

    def effective_ladder(self, weather: WeatherSample) -> tuple[np.ndarray, np.ndarray]:
        """
        Get the ladder parameters that apply under the given weather.

        Components without a heat balance only see the weather through the ambient
        temperature. For overhead lines the single loop resistance follows from the
        heat balance at the hot spot limit, and solar gain acts as a constant rise.

        Parameters
        ----------
        weather
            The weather conditions.

        Returns
        -------
        ``np.ndarray``
            The control parameters, shaped ``(nodes, loops)``.
        ``np.ndarray``
            The constant rise of each node.
        """
        if self.heat_balance is None:
            resistances = np.asarray(self.loop_resistances, dtype=float)
            rise = (
                np.asarray(self.dielectric_rise, dtype=float)
                if self.dielectric_rise
                else np.zeros(self.node_count)
            )

            return resistances, rise

        resistance = 1 / self.heat_balance.conductance(weather, self.hot_spot_limit)
        solar_rise = self.heat_balance.solar(weather.solar_wm2) * resistance
        base_rise = self.dielectric_rise[0] if self.dielectric_rise else 0.0

        return np.array([[resistance]]), np.array([base_rise + solar_rise])


@dataclass(frozen=True)
class ThermalComponentState:
    """The thermal state of a component at one point in time."""

    loop_rises: np.ndarray
    """Rise of every node and loop pair, shaped ``(nodes, loops)``."""

    node_temps: np.ndarray
    """Temperature of every ladder node, in degrees Celsius."""

    last_update: float = 0.0
    """The time of this state, in hours."""

    ambient_c: float = field(default=20.0, compare=False)
    """The ambient temperature at this state."""

    base_temps: np.ndarray | None = field(default=None, compare=False)
    """The temperature every node's loop rises are measured from (``θ_d + θ_amb``)."""

    @property
    def hot_spot(self) -> float:
        """The hot spot (conductor node) temperature."""
        return float(self.node_temps[0])

    @classmethod
    def at_ambient(
        cls, spec: ThermalLadderSpec, weather: WeatherSample, time: float = 0.0
    ) -> "ThermalComponentState":
        """
        Create a state without any loss driven rise.

        Parameters
        ----------
        spec
            The ladder parameters.
        weather
            The weather conditions, for the ambient temperature.
        time
            The time of the state, in hours.

        Returns
        -------
        ``ThermalComponentState``
            The state, with all loops at zero rise.
        """
        loop_rises = np.zeros((spec.node_count, spec.loop_count))
        _, rise = spec.effective_ladder(weather)

        return cls(
            loop_rises=loop_rises,
            node_temps=rise + weather.ambient_c,
            last_update=time,
            ambient_c=weather.ambient_c,
            base_temps=rise + weather.ambient_c,
        )


def _assemble_temps(
    spec: ThermalLadderSpec,
    loop_rises: np.ndarray,
    rise: np.ndarray,
    ambient_c: float,
    loss: float,
) -> np.ndarray:
    """
    Assemble node temperatures as ``θ_d + θ_amb + Σ_k θ_{j,k}``.

    Parameters
    ----------
    spec
        The ladder parameters.
    loop_rises
        Rise of every node and loop pair.
    rise
        The constant rise of each node.
    ambient_c
        The ambient temperature.
    loss
        The conductor loss, driving the instantaneous hot spot gradient.

    Returns
    -------
    ``np.ndarray``
        The node temperatures.
    """
    temps = rise + ambient_c + loop_rises.sum(axis=1)
    temps[0] += spec.hot_spot_gradient * loss

    return temps


def _rebased_rises(
    spec: ThermalLadderSpec, state: ThermalComponentState, base_temps: np.ndarray
) -> np.ndarray:
    """
    Shift the loop rises of a state onto new base temperatures.

    Node temperatures stay continuous when the weather changes. The shift is carried
    by the slowest loop.
    """
    if state.base_temps is None:
        return state.loop_rises

    shift = state.base_temps - base_temps

    if not np.any(shift):
        return state.loop_rises

    loop_rises = state.loop_rises.copy()
    loop_rises[:, int(np.argmax(spec.time_constants))] += shift

    return loop_rises


def _base_temps(spec: ThermalLadderSpec, weather: WeatherSample) -> np.ndarray:
    _, rise = spec.effective_ladder(weather)

    return rise + weather.ambient_c


def _integrate(
    spec: ThermalLadderSpec,
    state: ThermalComponentState,
    current: float,
    weather: WeatherSample,
    dt: float,
    steps: int,
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Apply the exponential ladder update ``steps`` times with step ``dt`` hours.

    Returns
    -------
    ``np.ndarray``
        The final loop rises.
    ``np.ndarray``
        The final node temperatures.
    ``float``
        The highest hot spot temperature at the start of the period or at any step
        boundary.
    """
    resistances, rise = spec.effective_ladder(weather)
    decay = np.exp(-dt / np.asarray(spec.time_constants))
    loop_rises = _rebased_rises(spec, state, rise + weather.ambient_c)
    conductor_c = state.hot_spot

    # The current and the weather switch at the start of the period.
    loss = spec.conductor_loss(current, conductor_c)
    temps = _assemble_temps(spec, loop_rises, rise, weather.ambient_c, loss)
    peak = float(temps[0])

    for _ in range(steps):
        loss = spec.conductor_loss(current, conductor_c)
        loop_rises = loop_rises * decay + resistances * loss * (1 - decay)
        temps = _assemble_temps(spec, loop_rises, rise, weather.ambient_c, loss)
        conductor_c = float(temps[0])
        peak = max(peak, conductor_c)

    return loop_rises, temps, peak


def ladder_step(
    spec: ThermalLadderSpec,
    state: ThermalComponentState,
    current: float,
    weather: WeatherSample,
    dt: float,
) -> ThermalComponentState:
    """
    Advance a thermal state by one exponential step.

    Every loop rise follows ``θ(t) = θ(t-1)·e^(-Δt/τ) + T·W_c·(1 - e^(-Δt/τ))``, with
    the conductor loss evaluated at the conductor temperature of the previous state.

    Parameters
    ----------
    spec
        The ladder parameters.
    state
        The state at the start of the step.
    current
        The (constant) current during the step, in A.
    weather
        The weather during the step.
    dt
        The step length, in hours.

    Returns
    -------
    ``ThermalComponentState``
        The state at the end of the step.

    Raises
    ------
    ValueError
        If the step length is not positive.
    """
    if dt <= 0:
        msg = f"Step length must be positive (got {dt})."
        raise ValueError(msg)

    loop_rises, temps, _ = _integrate(spec, state, current, weather, dt, steps=1)

    return ThermalComponentState(
        loop_rises=loop_rises,
        node_temps=temps,
        last_update=state.last_update + dt,
        ambient_c=weather.ambient_c,
        base_temps=_base_temps(spec, weather),
    )


def simulate(
    spec: ThermalLadderSpec,
    state: ThermalComponentState,
    current: float,
    weather: WeatherSample,
    duration: float,
    step_s: float = 60.0,
) -> tuple[ThermalComponentState, float]:
    """
    Simulate a constant current over a period, using fixed sub-steps.

    Parameters
    ----------
    spec
        The ladder parameters.
    state
        The state at the start of the period.
    current
        The current, in A.
    weather
        The weather during the period.
    duration
        The length of the period, in hours.
    step_s
        The sub-step length, in seconds.

    Returns
    -------
    ``ThermalComponentState``
        The state at the end of the period.
    ``float``
        The highest hot spot temperature seen during the period.
    """
    steps = max(1, round(duration * SECONDS_PER_HOUR / step_s))
    loop_rises, temps, peak = _integrate(
        spec, state, current, weather, duration / steps, steps
    )

    end_state = replace(
        state,
        loop_rises=loop_rises,
        node_temps=temps,
        last_update=state.last_update + duration,
        ambient_c=weather.ambient_c,
        base_temps=_base_temps(spec, weather),
    )

    return end_state, peak


def steady_temperature(
    spec: ThermalLadderSpec, current: float, weather: WeatherSample
) -> float:
    """
    Compute the steady state hot spot temperature for a constant current.

    Parameters
    ----------
    spec
        The ladder parameters.
    current
        The current, in A.
    weather
        The weather conditions.

    Returns
    -------
    ``float``
        The steady hot spot temperature, or ``inf`` on thermal runaway.
    """
    resistances, rise = spec.effective_ladder(weather)
    gain = resistances[0].sum() + spec.hot_spot_gradient
    heating = current**2 * spec.r0 * gain
    denominator = 1 - heating * spec.alpha

    if denominator <= 0:
        return math.inf

    return (
        rise[0] + weather.ambient_c + heating * (1 - spec.alpha * spec.theta_ref)
    ) / denominator


def equilibrium_state(
    spec: ThermalLadderSpec,
    current: float,
    weather: WeatherSample,
    time: float = 0.0,
) -> ThermalComponentState:
    """
    Create the state reached after holding a current indefinitely.

    Parameters
    ----------
    spec
        The ladder parameters.
    current
        The current, in A.
    weather
        The weather conditions.
    time
        The time of the state, in hours.

    Returns
    -------
    ``ThermalComponentState``
        The equilibrium state.

    Raises
    ------
    ValueError
        If the current causes thermal runaway.
    """
    conductor_c = steady_temperature(spec, current, weather)

    if math.isinf(conductor_c):
        msg = f"No thermal equilibrium exists for a current of {current:.1f} A."
        raise ValueError(msg)

    resistances, rise = spec.effective_ladder(weather)
    loss = spec.conductor_loss(current, conductor_c)
    loop_rises = resistances * loss

    return ThermalComponentState(
        loop_rises=loop_rises,
        node_temps=_assemble_temps(spec, loop_rises, rise, weather.ambient_c, loss),
        last_update=time,
        ambient_c=weather.ambient_c,
        base_temps=rise + weather.ambient_c,
    )
