"""Backward-forward sweep power flow over the BIBC matrix."""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from gridpeak.exceptions import VoltageCollapseError
from gridpeak.grid import BibcMatrix, RadialNetwork
from gridpeak.load import LoadTable

logger = logging.getLogger(__name__)

COLLAPSE_VOLTAGE = 0.5
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 100
V_SUB_RANGE = (0.85, 1.1)


@dataclass(frozen=True, eq=False)
class ImpedanceMatrix:
    """Section impedances ``Z_D`` and the derived matrix ``Υ = Ψᵀ·Z_D·Ψ``."""

    zd: np.ndarray
    """Diagonal matrix of section impedances, in per unit."""

    upsilon: np.ndarray
    """Maps load node current injections to voltage drops, in per unit."""


def build_upsilon(network: RadialNetwork, bibc: BibcMatrix) -> ImpedanceMatrix:
    """
    Build the matrix ``Υ = Ψᵀ·Z_D·Ψ`` of a network.

    Parameters
    ----------
    network
        The network.
    bibc
        The BIBC matrix of the network.

    Returns
    -------
    ``ImpedanceMatrix``
        The impedance matrices. Rows and columns of ``Υ`` follow the load nodes.

    Raises
    ------
    ValueError
        If the BIBC matrix does not match the network.
    """
    expected = (len(network.branches), len(network.load_buses))

    if bibc.shape != expected:
        msg = f"BIBC matrix has shape {bibc.shape}, network requires {expected}."
        raise ValueError(msg)

    zd = np.diag(np.array([branch.impedance for branch in network.branches], complex))
    psi = bibc.entries.astype(complex)

    return ImpedanceMatrix(zd=zd, upsilon=psi.T @ zd @ psi)


@dataclass(frozen=True, eq=False)
class PowerFlowResult:
    """The solved state of a network for one hour."""

    bus_ids: tuple[int, ...]
    """The load nodes, in the order of ``bus_voltages``."""

    section_ids: tuple[int, ...]
    """The sections, in the order of ``section_currents``."""

    bus_voltages: np.ndarray
    """The complex voltage of every load node, in per unit."""

    section_currents: np.ndarray
    """The complex current of every section, in per unit."""

    v_sub: float
    """The substation voltage, in per unit."""

    base_power: float
    """The base power, in MVA."""

    base_current: float
    """The base current, in A."""

    load_kw: float
    """The total active power of all loads, after curtailment."""

    loss_kw: float
    """The total active power loss in the sections."""

    iterations: int
    """The number of sweep iterations."""

    converged: bool
    """Whether the voltage change dropped below the tolerance."""

    substation_current: complex = 0j
    """The total current drawn from the substation, in per unit."""

    @property
    def transformer_current(self) -> float:
        """The magnitude of the current supplied by the substation transformer."""
        return abs(self.substation_current)

    @property
    def purchased_kw(self) -> float:
        """The active power bought at the substation, i.e. load plus losses."""
        return self.load_kw + self.loss_kw

    @property
    def substation_kw(self) -> float:
        """The active power delivered by the substation, from voltage and current."""
        return (
            float((self.v_sub * np.conj(self.substation_current)).real)
            * self.base_power
            * 1e3
        )

    @property
    def voltage_magnitudes(self) -> np.ndarray:
        """The voltage magnitude of every load node, in per unit."""
        return np.abs(self.bus_voltages)

    @property
    def section_currents_a(self) -> np.ndarray:
        """The current magnitude of every section, in A."""
        return np.abs(self.section_currents) * self.base_current

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the result to a ``dict``, e.g. for debugging.

        Returns
        -------
        ``dict[str, Any]``
            The voltages, currents, loss and iteration count.
        """
        return {
            "v": [
                {
                    "bus": bus_id,
                    "mag": float(abs(v)),
                    "ang": math.degrees(float(np.angle(v))),
                }
                for bus_id, v in zip(self.bus_ids, self.bus_voltages, strict=True)
            ],
            "i": [
                {
                    "section": section_id,
                    "mag": float(abs(i)),
                    "ang": math.degrees(float(np.angle(i))),
                }
                for section_id, i in zip(
                    self.section_ids, self.section_currents, strict=True
                )
            ],
            "loss_kw": self.loss_kw,
            "iters": self.iterations,
            "converged": self.converged,
        }


def _section_loss_kw(
    network: RadialNetwork, section_currents: np.ndarray
) -> float:
    return float(
        network.base_power
        * 1e3
        * np.sum(network.resistances * np.abs(section_currents) ** 2)
    )


def solve(
    network: RadialNetwork,
    bibc: BibcMatrix,
    upsilon: ImpedanceMatrix,
    loads: LoadTable,
    chi: np.ndarray,
    v_sub: float,
    hour: int,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> PowerFlowResult:
    """
    Solve the power flow of one hour with a backward-forward sweep.

    Starting from a flat voltage profile, every iteration evaluates the ZIP loads at the
    present voltages, computes the node current injections ``I = (S / V)*`` and updates
    the voltages as ``V = V_0 - Υ·I``. Section currents follow as ``Ψ·I``.

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
    chi
        The curtailed fraction of each load.
    v_sub
        The substation voltage, in per unit.
    hour
        The hour of the day.
    tolerance
        The largest voltage change (in per unit) at which the sweep has converged.
    max_iterations
        The maximum number of iterations.

    Returns
    -------
    ``PowerFlowResult``
        The solution. A sweep that does not converge is reported through the
        ``converged`` flag.

    Raises
    ------
    ValueError
        If the substation voltage or curtailment vector is invalid.
    VoltageCollapseError
        If any bus voltage drops below 0.5 per unit.
    """
    low, high = V_SUB_RANGE

    if not low <= v_sub <= high:
        msg = f"Substation voltage {v_sub} is not within [{low}, {high}] pu."
        raise ValueError(msg)

    chi = loads.check_chi(chi)
    base_kva = network.base_power * 1e3

    voltages = np.full(len(network.load_buses), v_sub, dtype=complex)
    converged = False
    iterations = 0

    while iterations < max_iterations:
        iterations += 1
        power = loads.bus_power(hour, np.abs(voltages), chi) / base_kva
        injections = np.conj(power / voltages)
        updated = v_sub - upsilon.upsilon @ injections

        change = float(np.max(np.abs(updated - voltages), initial=0.0))
        voltages = updated

        if np.any(np.abs(voltages) < COLLAPSE_VOLTAGE):
            msg = (
                f"Voltage collapse at hour {hour}: lowest voltage "
                f"{np.min(np.abs(voltages)):.3f} pu (v_sub={v_sub:.4f})."
            )
            raise VoltageCollapseError(msg)

        if change < tolerance:
            converged = True
            break

    power = loads.bus_power(hour, np.abs(voltages), chi) / base_kva
    injections = np.conj(power / voltages)
    section_currents = bibc.entries @ injections

    if converged:
        logger.debug("Power flow converged in %d iterations.", iterations)
    else:
        logger.debug("Power flow did not converge in %d iterations.", iterations)

    return PowerFlowResult(
        bus_ids=network.load_buses,
        section_ids=bibc.section_ids,
        bus_voltages=voltages,
        section_currents=section_currents,
        v_sub=v_sub,
        base_power=network.base_power,
        base_current=network.base_current,
        load_kw=float(power.real.sum() * base_kva),
        loss_kw=_section_loss_kw(network, section_currents),
        iterations=iterations,
        converged=converged,
        substation_current=complex(injections.sum()),
    )


def compute_loss(result: PowerFlowResult, network: RadialNetwork) -> float:
    """
    Compute the total loss ``S_base·Σ r_s·|I_s|²`` of a power flow solution.

    Parameters
    ----------
    result
        The power flow solution.
    network
        The network.

    Returns
    -------
    ``float``
        The loss, in kW.
    """
    return _section_loss_kw(network, result.section_currents)
