"""Per-hour cost minimization of peak events."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from gridpeak.exceptions import VoltageCollapseError
from gridpeak.grid import BibcMatrix, RadialNetwork
from gridpeak.load import LoadTable
from gridpeak.optimize.event import EventSchedule, EventSpec, HourSchedule
from gridpeak.optimize.swarm import PsoTrace, SwarmConfig, run_swarm
from gridpeak.powerflow import ImpedanceMatrix, PowerFlowResult, solve
from gridpeak.thermal import (
    ThermalComponentState,
    WeatherSample,
    advance_states,
    dynamic_ratings,
    equilibrium_states,
    static_ratings,
)
from gridpeak.util import HOURS_PER_DAY

logger = logging.getLogger(__name__)

VOLTAGE_TOLERANCE = 1e-6
CURRENT_TOLERANCE = 1e-3
CURTAILMENT_TOLERANCE = 1e-9
PENALTY_SCALE = 1e4
DIVERGENCE_SCALE = 1e3


@dataclass(frozen=True, eq=False)
class HourProblem:
    """The fixed inputs of optimizing one event hour."""

    network: RadialNetwork
    bibc: BibcMatrix
    upsilon: ImpedanceMatrix
    loads: LoadTable
    hour: int
    price: float
    """The energy price, in USD/kWh."""

    ratings: np.ndarray
    """The rating of every branch, in A."""

    event: EventSpec

    @property
    def curtailable(self) -> np.ndarray:
        """The (row) indices of the curtailable loads."""
        return self.loads.curtailable_indices

    @property
    def dims(self) -> int:
        """The number of decision variables."""
        return len(self.curtailable) + int(self.event.case_mode.uses_cvr)

    @property
    def lower(self) -> np.ndarray:
        """The lower bound of every decision variable."""
        chi = np.zeros(len(self.curtailable))

        if self.event.case_mode.uses_cvr:
            return np.concatenate(([self.event.v_sub_bounds[0]], chi))

        return chi

    @property
    def upper(self) -> np.ndarray:
        """The upper bound of every decision variable."""
        chi = np.full(len(self.curtailable), self.event.mcl)

        if self.event.case_mode.uses_cvr:
            return np.concatenate(([self.event.v_sub_bounds[1]], chi))

        return chi

    def decode(self, position: np.ndarray) -> tuple[float, np.ndarray]:
        """
        Split a decision vector into the substation voltage and curtailments.

        Parameters
        ----------
        position
            The decision vector, ``[v_sub, χ...]`` with voltage reduction and ``[χ...]``
            without.

        Returns
        -------
        ``float``
            The substation voltage.
        ``np.ndarray``
            The curtailed fraction of every load.
        """
        position = np.asarray(position, dtype=float)

        if self.event.case_mode.uses_cvr:
            v_sub, fractions = float(position[0]), position[1:]
        else:
            v_sub, fractions = self.event.v_sub_nominal, position

        chi = np.zeros(len(self.loads))
        chi[self.curtailable] = fractions

        return v_sub, chi

    def anchors(self) -> list[np.ndarray]:
        """
        Get the positions the first particles start at.

        Returns
        -------
        ``list[np.ndarray]``
            The positions of doing nothing, of curtailing as much as allowed, and
            (with voltage reduction) of the lowest substation voltage.
        """
        chi_none = np.zeros(len(self.curtailable))
        chi_max = np.full(len(self.curtailable), self.event.mcl)

        if not self.event.case_mode.uses_cvr:
            return [chi_none, chi_max]

        low, high = self.event.v_sub_bounds
        nominal = min(max(self.event.v_sub_nominal, low), high)

        return [
            np.concatenate(([nominal], chi_none)),
            np.concatenate(([nominal], chi_max)),
            np.concatenate(([low], chi_none)),
        ]


@dataclass(frozen=True, eq=False)
class Evaluation:
    """The cost and constraint violations of one decision vector."""

    v_sub: float
    chi: np.ndarray
    energy_cost: float
    """The cost of the purchased energy, in USD. Zero if the power flow diverged."""

    curtailment_cost: float
    """The penalty paid for curtailment, in USD."""

    violations: dict[str, float]
    """The summed violation of the voltage, current and curtailment limits."""

    fitness: float
    """The penalized cost the swarm minimizes."""

    feasible: bool
    """Whether all limits are met within tolerance."""

    flow: PowerFlowResult | None = None
    """The power flow, unless it diverged or collapsed."""

    @property
    def cost(self) -> float:
        """The cost, without penalties."""
        return self.energy_cost + self.curtailment_cost

    @property
    def diverged(self) -> bool:
        """Whether the power flow diverged or collapsed."""
        return self.flow is None

    @property
    def total_violation(self) -> float:
        """The sum of all violations."""
        return sum(self.violations.values())


def evaluate(
    position: np.ndarray,
    problem: HourProblem,
    penalty_weight: float,
    divergence_penalty: float,
) -> Evaluation:
    """
    Evaluate the cost and constraint violations of a decision vector.

    The cost is ``price·P_purchased + Σ ρ_i·χ_i·P⁰_i``. Violations of the bus voltage
    range, the section ratings and the maximum curtailment level are summed, and added
    to the cost with the penalty weight. A power flow that diverges or collapses costs
    a fixed penalty.

    Parameters
    ----------
    position
        The decision vector.
    problem
        The hour to evaluate for.
    penalty_weight
        The cost per unit of violation.
    divergence_penalty
        The cost of a diverging power flow.

    Returns
    -------
    ``Evaluation``
        The evaluation.
    """
    v_sub, chi = problem.decode(position)
    event = problem.event
    loads = problem.loads

    curtailment_excess = np.maximum(chi - event.mcl, 0)
    curtailment_cost = loads.curtailment_cost(problem.hour, np.clip(chi, 0, 1))

    try:
        flow = solve(
            problem.network,
            problem.bibc,
            problem.upsilon,
            loads,
            np.clip(chi, 0, 1),
            v_sub,
            problem.hour,
        )
    except VoltageCollapseError:
        flow = None

    if flow is None or not flow.converged:
        return Evaluation(
            v_sub=v_sub,
            chi=chi,
            energy_cost=0.0,
            curtailment_cost=curtailment_cost,
            violations={"curtailment": float(curtailment_excess.sum())},
            fitness=divergence_penalty
            + curtailment_cost
            + penalty_weight * float(curtailment_excess.sum()),
            feasible=False,
            flow=None,
        )

    v_min, v_max = event.v_bounds
    vmag = flow.voltage_magnitudes
    voltage_excess = np.maximum(v_min - vmag, 0) + np.maximum(vmag - v_max, 0)
    current_excess = np.maximum(flow.section_currents_a - problem.ratings, 0)

    violations = {
        "voltage": float(voltage_excess.sum()),
        "current": float(current_excess.sum()),
        "curtailment": float(curtailment_excess.sum()),
    }

    feasible = (
        float(np.max(voltage_excess, initial=0)) <= VOLTAGE_TOLERANCE
        and float(np.max(current_excess, initial=0)) <= CURRENT_TOLERANCE
        and float(np.max(curtailment_excess, initial=0)) <= CURTAILMENT_TOLERANCE
    )

    energy_cost = problem.price * flow.purchased_kw

    return Evaluation(
        v_sub=v_sub,
        chi=chi,
        energy_cost=energy_cost,
        curtailment_cost=curtailment_cost,
        violations=violations,
        fitness=energy_cost
        + curtailment_cost
        + penalty_weight * sum(violations.values()),
        feasible=feasible,
        flow=flow,
    )


@dataclass(frozen=True, eq=False)
class HourSolution:
    """The best decision found for one hour."""

    position: np.ndarray
    evaluation: Evaluation
    trace: PsoTrace = field(default_factory=lambda: PsoTrace(()))

    @property
    def best_cost(self) -> float:
        """The penalized cost of the best decision."""
        return self.evaluation.fitness

    @property
    def feasible(self) -> bool:
        """Whether the best decision meets all limits."""
        return self.evaluation.feasible


def penalty_weights(
    config: SwarmConfig, event: EventSpec, loads: LoadTable
) -> tuple[float, float]:
    """
    Resolve the penalty weight and divergence penalty of an event.

    Unless configured, the penalty weight is ``1e4`` times the largest hourly energy
    cost of the baseline loads, and the divergence penalty ``1e3`` times that.

    Parameters
    ----------
    config
        The swarm settings.
    event
        The event.
    loads
        The loads.

    Returns
    -------
    ``float``
        The penalty weight.
    ``float``
        The divergence penalty.
    """
    penalty_weight = config.penalty_weight

    if penalty_weight is None:
        hourly_cost = max(
            event.market_prices[hour] * loads.baseline_total_kw(hour)
            for hour in event.event_hours
        )
        penalty_weight = PENALTY_SCALE * max(hourly_cost, 1.0)

    divergence_penalty = config.divergence_penalty or DIVERGENCE_SCALE * penalty_weight

    return penalty_weight, divergence_penalty


def optimize_hour(
    problem: HourProblem,
    config: SwarmConfig,
    penalty_weight: float | None = None,
    divergence_penalty: float | None = None,
) -> HourSolution:
    """
    Find the cheapest operating point of one hour with a particle swarm.

    Parameters
    ----------
    problem
        The hour to optimize.
    config
        The swarm settings.
    penalty_weight
        The cost per unit of violation. Resolved from the event when not provided.
    divergence_penalty
        The cost of a diverging power flow. Resolved from the event when not provided.

    Returns
    -------
    ``HourSolution``
        The best decision, which is flagged infeasible when no particle met all
        limits.
    """
    if penalty_weight is None or divergence_penalty is None:
        default_weight, default_divergence = penalty_weights(
            config, problem.event, problem.loads
        )
        penalty_weight = penalty_weight or default_weight
        divergence_penalty = divergence_penalty or default_divergence

    if problem.dims == 0:
        position = np.zeros(0)
        evaluation = evaluate(position, problem, penalty_weight, divergence_penalty)

        return HourSolution(position, evaluation, PsoTrace((evaluation.fitness,)))

    def objective(position: np.ndarray) -> float:
        return evaluate(position, problem, penalty_weight, divergence_penalty).fitness

    gbest, trace = run_swarm(
        objective,
        problem.lower,
        problem.upper,
        config,
        stream=problem.hour,
        anchors=problem.anchors(),
    )

    evaluation = evaluate(gbest.position, problem, penalty_weight, divergence_penalty)

    return HourSolution(gbest.position, evaluation, trace)


def initial_thermal_states(
    network: RadialNetwork,
    bibc: BibcMatrix,
    upsilon: ImpedanceMatrix,
    loads: LoadTable,
    weather: Mapping[int, WeatherSample],
    first_hour: int,
    v_sub: float = 1.0,
) -> list[ThermalComponentState]:
    """
    Get the thermal states at the start of an event.

    Every branch is at equilibrium with the current it carries in the hour before the
    event, without curtailment and at the given substation voltage.

    Parameters
    ----------
    network
        The network.
    bibc
        The BIBC matrix of the network.
    upsilon
        The impedance matrices of the network.
    loads
        The loads.
    weather
        The weather, by hour. Falls back to the first event hour when the hour before
        is not covered.
    first_hour
        The first hour of the event.
    v_sub
        The substation voltage.

    Returns
    -------
    ``list[ThermalComponentState]``
        The state of every branch.
    """
    previous = (first_hour - 1) % HOURS_PER_DAY
    flow = solve(network, bibc, upsilon, loads, np.zeros(len(loads)), v_sub, previous)

    if not flow.converged:
        logger.warning(
            "The power flow of hour %d did not converge after %d iterations, the "
            "initial thermal states use its last currents.",
            previous,
            flow.iterations,
        )

    conditions = weather.get(previous, weather[first_hour])

    return equilibrium_states(
        network, flow.section_currents_a, conditions, time=float(first_hour)
    )


def _hour_schedule(problem: HourProblem, solution: HourSolution) -> HourSchedule:
    evaluation = solution.evaluation

    return HourSchedule(
        hour=problem.hour,
        v_sub=evaluation.v_sub,
        chi=evaluation.chi,
        load_buses=tuple(load.bus for load in problem.loads.loads),
        price=problem.price,
        energy_cost_usd=evaluation.energy_cost,
        curtailment_cost_usd=evaluation.curtailment_cost,
        feasible=evaluation.feasible,
        flow=evaluation.flow,
        ratings=problem.ratings,
        curtailed_kw=problem.loads.curtailed_kw(problem.hour, evaluation.chi),
        violation=evaluation.total_violation,
        trace=solution.trace.costs,
    )


def optimize_event(
    event: EventSpec,
    network: RadialNetwork,
    bibc: BibcMatrix,
    upsilon: ImpedanceMatrix,
    loads: LoadTable,
    config: SwarmConfig,
    weather: Mapping[int, WeatherSample] | None = None,
    initial_states: Sequence[ThermalComponentState] | None = None,
) -> EventSchedule:
    """
    Optimize every hour of a peak event, in order.

    With dynamic ratings, the thermal state of every branch advances with the currents
    of the chosen operating point, before the ratings of the next hour are computed.

    Parameters
    ----------
    event
        The event.
    network
        The network.
    bibc
        The BIBC matrix of the network.
    upsilon
        The impedance matrices of the network.
    loads
        The loads.
    config
        The swarm settings.
    weather
        The weather, by hour. Required for dynamic ratings.
    initial_states
        The thermal states at the start of the event. By default, every branch is at
        equilibrium with the baseline loading of the hour before the event.

    Returns
    -------
    ``EventSchedule``
        The schedule, with infeasible hours marked.

    Raises
    ------
    ValueError
        If weather is missing for dynamic ratings.
    """
    mode = event.case_mode
    penalty_weight, divergence_penalty = penalty_weights(config, event, loads)
    states = None

    if mode.uses_dtr:
        missing = [
            hour for hour in event.event_hours if weather is None or hour not in weather
        ]

        if missing:
            msg = f"Dynamic ratings need weather for hours {missing}."
            raise ValueError(msg)

        states = list(
            initial_states
            or initial_thermal_states(
                network,
                bibc,
                upsilon,
                loads,
                weather,
                event.event_hours[0],
                event.v_sub_nominal,
            )
        )

    hours = []

    for hour in event.event_hours:
        if states is not None:
            ratings = dynamic_ratings(network, states, weather[hour])
        else:
            ratings = static_ratings(network)

        problem = HourProblem(
            network=network,
            bibc=bibc,
            upsilon=upsilon,
            loads=loads,
            hour=hour,
            price=event.market_prices[hour],
            ratings=ratings,
            event=event,
        )

        solution = optimize_hour(problem, config, penalty_weight, divergence_penalty)
        schedule = _hour_schedule(problem, solution)
        hours.append(schedule)

        if states is not None:
            carried = (
                schedule.flow.section_currents_a
                if schedule.flow is not None
                else ratings
            )
            states = advance_states(network, states, carried, weather[hour])

        if schedule.feasible:
            logger.info(
                "Hour %d (%s): cost %.2f USD, v_sub %.4f pu.",
                hour,
                mode.value,
                schedule.total_cost_usd,
                schedule.v_sub,
            )
        else:
            logger.warning(
                "Hour %d (%s): no feasible operating point found (violation %.4g).",
                hour,
                mode.value,
                schedule.violation,
            )

        if schedule.diverged:
            logger.warning(
                "Hour %d (%s): the power flow diverged, its energy cost is left out "
                "of the totals.",
                hour,
                mode.value,
            )

    return EventSchedule(case_mode=mode, hours=tuple(hours))

