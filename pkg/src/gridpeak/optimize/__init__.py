"""Cost minimization of peak events with a particle swarm."""

from .event import CaseMode, EventSchedule, EventSpec, HourSchedule
from .peak import (
    Evaluation,
    HourProblem,
    HourSolution,
    evaluate,
    initial_thermal_states,
    optimize_event,
    optimize_hour,
    penalty_weights,
)
from .swarm import GlobalBest, Particle, PsoTrace, SwarmConfig, pso_update, run_swarm

__all__ = [
    "CaseMode",
    "EventSchedule",
    "EventSpec",
    "HourSchedule",
    "Evaluation",
    "HourProblem",
    "HourSolution",
    "evaluate",
    "initial_thermal_states",
    "optimize_event",
    "optimize_hour",
    "penalty_weights",
    "GlobalBest",
    "Particle",
    "PsoTrace",
    "SwarmConfig",
    "pso_update",
    "run_swarm",
]
