"""How the lowest feasible substation voltage depends on the demand factor."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from gridpeak.exceptions import ArgumentError, VoltageCollapseError
from gridpeak.grid import BibcMatrix, RadialNetwork, build_bibc, load_feeder
from gridpeak.load import LoadTable
from gridpeak.powerflow import ImpedanceMatrix, build_upsilon, solve
from gridpeak.scenario.config import ScenarioConfig
from gridpeak.thermal import static_ratings

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_HOUR = 8
SCAN_STEP = 0.005
BISECT_XTOL = 1e-6
VOLTAGE_TOLERANCE = 1e-6
CURRENT_TOLERANCE = 1e-3


@dataclass(frozen=True, eq=False)
class SweepProblem:
    """The fixed inputs of a sweep: one hour of a feeder, without curtailment."""

    network: RadialNetwork
    bibc: BibcMatrix
    upsilon: ImpedanceMatrix
    loads: LoadTable
    """The loads, at a demand factor of 1."""

    hour: int
    v_bounds: tuple[float, float]
    v_sub_bounds: tuple[float, float]
    ratings: np.ndarray
    """The static rating of every branch, in A."""

    def is_feasible(self, loads: LoadTable, v_sub: float) -> bool:
        """
        Check whether a substation voltage meets all voltage and current limits.

        Parameters
        ----------
        loads
            The (scaled) loads.
        v_sub
            The substation voltage, in per unit.

        Returns
        -------
        ``bool``
            Whether the power flow converges within the voltage and current limits.
        """
        try:
            flow = solve(
                self.network,
                self.bibc,
                self.upsilon,
                loads,
                np.zeros(len(loads)),
                v_sub,
                self.hour,
            )
        except VoltageCollapseError:
            return False

        if not flow.converged:
            logger.warning(
                "Power flow did not converge at v_sub=%.4f, hour %d.", v_sub, self.hour
            )
            return False

        v_min, v_max = self.v_bounds
        vmag = flow.voltage_magnitudes

        return bool(
            np.all(vmag >= v_min - VOLTAGE_TOLERANCE)
            and np.all(vmag <= v_max + VOLTAGE_TOLERANCE)
            and np.all(flow.section_currents_a <= self.ratings + CURRENT_TOLERANCE)
        )

    def min_feasible_v_sub(self, factor: float) -> float:
        """
        Find the lowest feasible substation voltage at a demand factor.

        A coarse scan over the substation voltage range locates the first feasible
        voltage, after which bisection narrows the boundary down.

        Parameters
        ----------
        factor
            The demand factor.

        Returns
        -------
        ``float``
            The lowest feasible substation voltage, or ``nan`` if no voltage in the
            range is feasible.
        """
        loads = self.loads.scaled(factor)
        low, high = self.v_sub_bounds
        steps = max(1, math.ceil(round((high - low) / SCAN_STEP, 9)))
        grid = np.linspace(low, high, steps + 1)

        def sign(v: float) -> float:
            return 1.0 if self.is_feasible(loads, v) else -1.0

        for k, v_sub in enumerate(grid):
            if not self.is_feasible(loads, float(v_sub)):
                continue

            if k == 0:
                return float(v_sub)

            root = bisect(sign, float(grid[k - 1]), float(v_sub), xtol=BISECT_XTOL)

            for candidate in (root, root + BISECT_XTOL, float(v_sub)):
                if self.is_feasible(loads, candidate):
                    return float(candidate)

        return math.nan


def sweep_problem(
    config: ScenarioConfig, hour: int = DEFAULT_SWEEP_HOUR
) -> SweepProblem:
    """
    Prepare a sweep of the feeder of a scenario.

    Parameters
    ----------
    config
        The scenario. Its voltage bounds apply, its demand factor does not.
    hour
        The hour of the day to sweep.

    Returns
    -------
    ``SweepProblem``
        The sweep inputs.
    """
    network, loads = load_feeder(config.network_path)
    bibc = build_bibc(network)

    return SweepProblem(
        network=network,
        bibc=bibc,
        upsilon=build_upsilon(network, bibc),
        loads=loads,
        hour=hour,
        v_bounds=config.settings.v_bounds,
        v_sub_bounds=config.settings.v_sub_bounds,
        ratings=static_ratings(network),
    )


def demand_factor_sweep(
    config: ScenarioConfig,
    factors: Sequence[float],
    hour: int = DEFAULT_SWEEP_HOUR,
) -> pd.DataFrame:
    """
    Find the lowest feasible substation voltage for a range of demand factors.

    For every factor, all baseline loads are scaled, curtailment is zero and ratings
    are static.

    Parameters
    ----------
    config
        The scenario.
    factors
        The demand factors, in ascending order.
    hour
        The hour of the day to sweep.

    Returns
    -------
    ``pd.DataFrame``
        One row per factor, with columns ``factor``, ``min_v_sub`` and ``feasible``.
        Factors for which no substation voltage is feasible have ``min_v_sub = nan``.

    Raises
    ------
    ArgumentError
        If the factors are not ascending, or negative.
    """
    if any(factor < 0 for factor in factors):
        msg = f"Demand factors {list(factors)} must not be negative."
        raise ArgumentError(msg)

    if list(factors) != sorted(factors):
        msg = f"Demand factors {list(factors)} must be in ascending order."
        raise ArgumentError(msg)

    problem = sweep_problem(config, hour)
    rows = []

    for factor in factors:
        v_sub = problem.min_feasible_v_sub(factor)
        feasible = not math.isnan(v_sub)

        if feasible:
            logger.info("Demand factor %.3f: minimum v_sub %.6f pu.", factor, v_sub)
        else:
            logger.warning("Demand factor %.3f: no feasible v_sub.", factor)

        rows.append({"factor": factor, "min_v_sub": v_sub, "feasible": feasible})

    frame = pd.DataFrame(rows, columns=["factor", "min_v_sub", "feasible"])

    return frame.round({"min_v_sub": 6})
