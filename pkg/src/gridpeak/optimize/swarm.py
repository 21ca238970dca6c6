"""A deterministic particle swarm optimizer over a box."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import pydantic

from gridpeak.util import particle_rng

logger = logging.getLogger(__name__)

PROGRESS_INTERVAL = 10


class SwarmConfig(pydantic.BaseModel):
    """Settings of the particle swarm."""

    particle_count: int = pydantic.Field(default=40, ge=2)
    """The number of particles."""

    max_iterations: int = pydantic.Field(default=100, ge=1)
    """The number of iterations."""

    inertia: float = pydantic.Field(default=0.9, ge=0, le=1)
    """The inertia weight ``ω`` at the first iteration."""

    inertia_final: float = pydantic.Field(default=0.4, ge=0, le=1)
    """The inertia weight at the last iteration, linearly decayed to."""

    cognitive: float = pydantic.Field(default=2.0, ge=0)
    """Attraction ``c₁`` towards the personal best."""

    social: float = pydantic.Field(default=2.0, ge=0)
    """Attraction ``c₂`` towards the global best."""

    seed: int = pydantic.Field(default=0, ge=0)
    """The master seed."""

    penalty_weight: pydantic.PositiveFloat | None = None
    """Cost per unit of constraint violation. Derived from energy costs if not set."""

    divergence_penalty: pydantic.PositiveFloat | None = None
    """Fixed cost of a diverging power flow. Derived from the penalty weight."""

    velocity_clamp: float = pydantic.Field(default=0.2, gt=0, le=1)
    """The largest velocity, as a fraction of the box width."""

    workers: int = pydantic.Field(default=1, ge=1)
    """The number of threads evaluating particles."""

    model_config = {"extra": "forbid"}

    def inertia_at(self, iteration: int) -> float:
        """
        Get the inertia weight of an iteration.

        Parameters
        ----------
        iteration
            The iteration, starting at 1.

        Returns
        -------
        ``float``
            The inertia weight.
        """
        if self.max_iterations == 1:
            return self.inertia

        progress = (iteration - 1) / (self.max_iterations - 1)

        return self.inertia + (self.inertia_final - self.inertia) * progress


@dataclass(frozen=True, eq=False)
class Particle:
    """A candidate solution, moving through the decision space."""

    position: np.ndarray
    """The decision vector."""

    velocity: np.ndarray
    """The velocity."""

    pbest_position: np.ndarray
    """The best position this particle has visited."""

    pbest_cost: float = np.inf
    """The cost at the personal best position."""


@dataclass(frozen=True, eq=False)
class GlobalBest:
    """The best position found by any particle."""

    position: np.ndarray
    """The decision vector."""

    cost: float
    """The cost at this position."""

    index: int = 0
    """The particle that found it."""


@dataclass(frozen=True)
class PsoTrace:
    """The global best cost after initialization and after every iteration."""

    costs: tuple[float, ...]

    def __len__(self) -> int:
        """
        Get the number of recorded costs.

        Returns
        -------
        ``int``
            The number of recorded costs.
        """
        return len(self.costs)

    @property
    def final(self) -> float:
        """The final global best cost."""
        return self.costs[-1]


def pso_update(
    particle: Particle,
    gbest: GlobalBest,
    config: SwarmConfig,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
    inertia: float | None = None,
) -> Particle:
    """
    Move a particle one step.

    The velocity becomes ``ω·v + c₁·r₁·(pbest - y) + c₂·r₂·(gbest - y)`` with fresh
    uniform ``r₁``, ``r₂`` per dimension, clamped to a fraction of the box width. The
    position moves by the velocity and is clamped to the box.

    Parameters
    ----------
    particle
        The particle.
    gbest
        The global best.
    config
        The swarm settings.
    rng
        The random stream of this particle and iteration.
    lower
        The lower bound of every dimension.
    upper
        The upper bound of every dimension.
    inertia
        The inertia weight. Defaults to ``config.inertia``.

    Returns
    -------
    ``Particle``
        The moved particle. Its personal best is unchanged.
    """
    omega = config.inertia if inertia is None else inertia
    dims = len(particle.position)

    r1 = rng.random(dims)
    r2 = rng.random(dims)

    velocity = (
        omega * particle.velocity
        + config.cognitive * r1 * (particle.pbest_position - particle.position)
        + config.social * r2 * (gbest.position - particle.position)
    )

    limit = config.velocity_clamp * (upper - lower)
    velocity = np.clip(velocity, -limit, limit)
    position = np.clip(particle.position + velocity, lower, upper)

    return replace(particle, position=position, velocity=velocity)


def _evaluate_all(
    objective: Callable[[np.ndarray], float],
    positions: Sequence[np.ndarray],
    executor: ThreadPoolExecutor | None,
) -> list[float]:
    if executor is None:
        return [objective(position) for position in positions]

    return list(executor.map(objective, positions))


def _fold_best(particles: Sequence[Particle], gbest: GlobalBest | None) -> GlobalBest:
    """Fold the personal bests into the global best, in particle order."""
    for i, particle in enumerate(particles):
        if gbest is None or particle.pbest_cost < gbest.cost:
            gbest = GlobalBest(
                position=particle.pbest_position.copy(),
                cost=particle.pbest_cost,
                index=i,
            )

    return gbest


def run_swarm(
    objective: Callable[[np.ndarray], float],
    lower: np.ndarray,
    upper: np.ndarray,
    config: SwarmConfig,
    stream: int = 0,
    anchors: Sequence[np.ndarray] = (),
) -> tuple[GlobalBest, PsoTrace]:
    """
    Minimize an objective over a box with a particle swarm.

    Each particle draws from its own random stream, derived from the seed, the
    ``stream`` counter, the iteration and the particle index. Together with the fold of
    personal bests in particle order, this makes results independent of the number of
    workers.

    Parameters
    ----------
    objective
        The function to minimize. Must be thread safe when using multiple workers.
    lower
        The lower bound of every dimension.
    upper
        The upper bound of every dimension.
    config
        The swarm settings.
    stream
        A counter that separates independent runs with the same seed, e.g. the hour.
    anchors
        Positions to start the first particles at. Remaining particles start at
        random positions.

    Returns
    -------
    ``GlobalBest``
        The best position found.
    ``PsoTrace``
        The global best cost after initialization and after every iteration.

    Raises
    ------
    ValueError
        If the bounds are inconsistent.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)

    if lower.shape != upper.shape or np.any(upper < lower):
        msg = "Swarm bounds must have the same shape, with lower <= upper."
        raise ValueError(msg)

    width = upper - lower
    particles = []

    for i in range(config.particle_count):
        rng = particle_rng(config.seed, stream, 0, i)
        position = lower + rng.random(len(lower)) * width

        if i < len(anchors):
            position = np.clip(np.asarray(anchors[i], dtype=float), lower, upper)

        velocity = (2 * rng.random(len(lower)) - 1) * config.velocity_clamp * width
        particles.append(
            Particle(position=position, velocity=velocity, pbest_position=position)
        )

    executor = (
        ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    )

    try:
        costs = _evaluate_all(objective, [p.position for p in particles], executor)
        particles = [
            replace(p, pbest_cost=cost)
            for p, cost in zip(particles, costs, strict=True)
        ]
        gbest = _fold_best(particles, None)
        trace = [gbest.cost]

        for iteration in range(1, config.max_iterations + 1):
            inertia = config.inertia_at(iteration)
            particles = [
                pso_update(
                    particle,
                    gbest,
                    config,
                    particle_rng(config.seed, stream, iteration, i),
                    lower,
                    upper,
                    inertia,
                )
                for i, particle in enumerate(particles)
            ]

            costs = _evaluate_all(objective, [p.position for p in particles], executor)

            particles = [
                replace(p, pbest_position=p.position.copy(), pbest_cost=cost)
                if cost < p.pbest_cost
                else p
                for p, cost in zip(particles, costs, strict=True)
            ]

            gbest = _fold_best(particles, gbest)
            trace.append(gbest.cost)

            if iteration % PROGRESS_INTERVAL == 0:
                logger.debug(
                    "Swarm %d, iteration %d: best cost %.4f (particle %d).",
                    stream,
                    iteration,
                    gbest.cost,
                    gbest.index,
                )
    finally:
        if executor is not None:
            executor.shutdown()

    return gbest, PsoTrace(tuple(trace))
