"""Voltage dependent (ZIP) loads and curtailment."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from gridpeak.util import HOURS_PER_DAY

if TYPE_CHECKING:
    from gridpeak.grid import RadialNetwork

ZIP_SUM_TOLERANCE = 1e-9
ZIP_COEFFICIENT_BOUND = 2.0
REF_VOLTAGE_RANGE = (0.9, 1.1)


@dataclass(frozen=True)
class ZipCoefficients:
    """
    The share of constant impedance (Z), current (I) and power (P) behaviour of a
    load, for active and reactive power separately.
    """

    cz_p: float = 0.0
    ci_p: float = 0.0
    cp_p: float = 1.0
    cz_q: float = 0.0
    ci_q: float = 0.0
    cp_q: float = 1.0

    def __post_init__(self) -> None:
        """
        Validate the coefficients.

        Raises
        ------
        ValueError
            If the coefficients are not finite, do not sum to one, or are out of
            bounds.
        """
        for name, coefficients in (("active", self.p), ("reactive", self.q)):
            if not all(math.isfinite(c) for c in coefficients):
                msg = f"The {name} ZIP coefficients {coefficients} must be finite."
                raise ValueError(msg)

            if not math.isclose(sum(coefficients), 1.0, abs_tol=ZIP_SUM_TOLERANCE):
                msg = (
                    f"The {name} ZIP coefficients {coefficients} must sum to 1 "
                    f"(got {sum(coefficients)})."
                )
                raise ValueError(msg)

            if any(abs(c) > ZIP_COEFFICIENT_BOUND for c in coefficients):
                msg = (
                    f"The {name} ZIP coefficients {coefficients} must lie within "
                    f"[-{ZIP_COEFFICIENT_BOUND}, {ZIP_COEFFICIENT_BOUND}]."
                )
                raise ValueError(msg)

    @property
    def p(self) -> tuple[float, float, float]:
        """The active power coefficients, as ``(Z, I, P)``."""
        return (self.cz_p, self.ci_p, self.cp_p)

    @property
    def q(self) -> tuple[float, float, float]:
        """The reactive power coefficients, as ``(Z, I, P)``."""
        return (self.cz_q, self.ci_q, self.cp_q)

    @classmethod
    def constant_impedance(cls) -> "ZipCoefficients":
        """Coefficients of a pure constant impedance load."""
        return cls(cz_p=1.0, cp_p=0.0, cz_q=1.0, cp_q=0.0)

    @classmethod
    def constant_current(cls) -> "ZipCoefficients":
        """Coefficients of a pure constant current load."""
        return cls(ci_p=1.0, cp_p=0.0, ci_q=1.0, cp_q=0.0)

    @classmethod
    def constant_power(cls) -> "ZipCoefficients":
        """Coefficients of a pure constant power load."""
        return cls()


def _zip_factor(
    coefficients: tuple[float, float, float], ratio: np.ndarray
) -> np.ndarray:
    cz, ci, cp = coefficients

    return cz * ratio**2 + ci * ratio + cp


@dataclass(frozen=True)
class ZipLoad:
    """A load point, with an hourly baseline profile."""

    bus: int
    """The bus the load is connected to."""

    baseline_p: tuple[float, ...]
    """The active power of every hour of the day, before voltage reduction, in kW."""

    baseline_q: tuple[float, ...]
    """The reactive power of every hour of the day, in kvar."""

    ref_voltage: float = 1.0
    """The voltage at which the baseline applies, in per unit."""

    coefficients: ZipCoefficients = field(default_factory=ZipCoefficients)
    """The ZIP coefficients."""

    curtailable: bool = False
    """Whether the load takes part in demand response."""

    penalty_price: float = 0.0
    """The price paid per curtailed kW, in USD."""

    def __post_init__(self) -> None:
        """
        Validate the load.

        Raises
        ------
        ValueError
            If the profile, reference voltage or penalty price is invalid.
        """
        if {len(self.baseline_p), len(self.baseline_q)} != {HOURS_PER_DAY}:
            msg = f"Load at bus {self.bus} needs {HOURS_PER_DAY} hourly values."
            raise ValueError(msg)

        if any(p < 0 for p in self.baseline_p):
            msg = f"Load at bus {self.bus} has a negative baseline active power."
            raise ValueError(msg)

        low, high = REF_VOLTAGE_RANGE

        if not low <= self.ref_voltage <= high:
            msg = (
                f"Load at bus {self.bus} has reference voltage {self.ref_voltage}, "
                f"which is not within [{low}, {high}]."
            )
            raise ValueError(msg)

        if self.penalty_price < 0:
            msg = f"Load at bus {self.bus} has a negative penalty price."
            raise ValueError(msg)


def _check_voltage(v: float) -> None:
    if v <= 0:
        msg = f"Voltage must be positive (got {v})."
        raise ValueError(msg)


def _check_hour(hour: int) -> None:
    if not 0 <= hour < HOURS_PER_DAY:
        msg = f"Hour must be within [0, {HOURS_PER_DAY - 1}] (got {hour})."
        raise ValueError(msg)


def _check_chi(chi: float) -> None:
    if not 0 <= chi <= 1:
        msg = f"Curtailment fraction must be within [0, 1] (got {chi})."
        raise ValueError(msg)


def zip_active(load: ZipLoad, hour: int, v: float) -> float:
    """
    Compute the active power of a load at a voltage.

    Parameters
    ----------
    load
        The load.
    hour
        The hour of the day.
    v
        The voltage magnitude, in per unit.

    Returns
    -------
    ``float``
        The active power, in kW.

    Raises
    ------
    ValueError
        If the hour is not within the day, or the voltage is not positive.
    """
    _check_hour(hour)
    _check_voltage(v)

    return load.baseline_p[hour] * float(
        _zip_factor(load.coefficients.p, np.float64(v / load.ref_voltage))
    )


def zip_reactive(load: ZipLoad, hour: int, v: float) -> float:
    """
    Compute the reactive power of a load at a voltage.

    Parameters
    ----------
    load
        The load.
    hour
        The hour of the day.
    v
        The voltage magnitude, in per unit.

    Returns
    -------
    ``float``
        The reactive power, in kvar.

    Raises
    ------
    ValueError
        If the hour is not within the day, or the voltage is not positive.
    """
    _check_hour(hour)
    _check_voltage(v)

    return load.baseline_q[hour] * float(
        _zip_factor(load.coefficients.q, np.float64(v / load.ref_voltage))
    )


def effective_injection(
    load: ZipLoad, hour: int, v: float, chi: float
) -> tuple[float, float]:
    """
    Compute the power a load draws after curtailment.

    Parameters
    ----------
    load
        The load.
    hour
        The hour of the day.
    v
        The voltage magnitude, in per unit.
    chi
        The curtailed fraction of the load.

    Returns
    -------
    ``tuple[float, float]``
        The active (kW) and reactive (kvar) power.

    Raises
    ------
    ValueError
        If the hour is not within the day, the voltage is not positive, or
        ``chi`` is not within [0, 1].
    """
    _check_chi(chi)

    return (
        (1 - chi) * zip_active(load, hour, v),
        (1 - chi) * zip_reactive(load, hour, v),
    )


@dataclass(frozen=True, eq=False)
class LoadTable:
    """
    All loads of a network, as arrays.

    Rows follow the order of ``loads``. Curtailment vectors hold one fraction per
    load, and must be zero for loads that are not curtailable.
    """

    loads: tuple[ZipLoad, ...]
    """The loads."""

    columns: np.ndarray
    """The load node (BIBC column) of each load."""

    column_count: int
    """The number of load nodes of the network."""

    p0: np.ndarray
    """Baseline active power, shaped ``(loads, 24)``, in kW."""

    q0: np.ndarray
    """Baseline reactive power, shaped ``(loads, 24)``, in kvar."""

    @classmethod
    def from_loads(
        cls, loads: Sequence[ZipLoad], network: "RadialNetwork"
    ) -> "LoadTable":
        """
        Create a load table for a network.

        Parameters
        ----------
        loads
            The loads.
        network
            The network the loads are connected to.

        Returns
        -------
        ``LoadTable``
            The load table.

        Raises
        ------
        ValueError
            If a load is connected to an unknown bus, or to the substation.
        """
        columns = []

        for load in loads:
            if load.bus not in network.load_index:
                msg = (
                    f"Load at bus {load.bus} is not connected to a load node of the "
                    f"network."
                )
                raise ValueError(msg)

            columns.append(network.load_index[load.bus])

        return cls(
            loads=tuple(loads),
            columns=np.array(columns, dtype=int),
            column_count=len(network.load_buses),
            p0=np.array([load.baseline_p for load in loads], dtype=float).reshape(
                -1, HOURS_PER_DAY
            ),
            q0=np.array([load.baseline_q for load in loads], dtype=float).reshape(
                -1, HOURS_PER_DAY
            ),
        )

    def __len__(self) -> int:
        """
        Get the number of loads.

        Returns
        -------
        ``int``
            The number of loads.
        """
        return len(self.loads)

    @property
    def ref_voltages(self) -> np.ndarray:
        """The reference voltage of each load."""
        return np.array([load.ref_voltage for load in self.loads], dtype=float)

    @property
    def coef_p(self) -> np.ndarray:
        """The active ZIP coefficients, shaped ``(loads, 3)``."""
        return np.array([load.coefficients.p for load in self.loads]).reshape(-1, 3)

    @property
    def coef_q(self) -> np.ndarray:
        """The reactive ZIP coefficients, shaped ``(loads, 3)``."""
        return np.array([load.coefficients.q for load in self.loads]).reshape(-1, 3)

    @property
    def penalty_prices(self) -> np.ndarray:
        """The curtailment penalty price of each load, in USD/kW."""
        return np.array([load.penalty_price for load in self.loads], dtype=float)

    @property
    def curtailable_indices(self) -> np.ndarray:
        """The (row) indices of the curtailable loads."""
        return np.array(
            [i for i, load in enumerate(self.loads) if load.curtailable], dtype=int
        )

    @property
    def curtailable_buses(self) -> tuple[int, ...]:
        """The bus of each curtailable load."""
        return tuple(self.loads[i].bus for i in self.curtailable_indices)

    def check_chi(self, chi: np.ndarray) -> np.ndarray:
        """
        Validate a curtailment vector.

        Parameters
        ----------
        chi
            The curtailed fraction of each load.

        Returns
        -------
        ``np.ndarray``
            The curtailment vector, as an array.

        Raises
        ------
        ValueError
            If the vector has the wrong length, has values outside [0, 1], or
            curtails a load that is not curtailable.
        """
        chi = np.asarray(chi, dtype=float)

        if chi.shape != (len(self),):
            msg = f"Expected {len(self)} curtailment fractions, got {chi.shape}."
            raise ValueError(msg)

        if np.any(chi < 0) or np.any(chi > 1):
            msg = "Curtailment fractions must be within [0, 1]."
            raise ValueError(msg)

        fixed = np.ones(len(self), dtype=bool)
        fixed[self.curtailable_indices] = False

        if np.any(chi[fixed] != 0):
            msg = "Only curtailable loads can be curtailed."
            raise ValueError(msg)

        return chi

    def injections(
        self, hour: int, vmag: np.ndarray, chi: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Compute the power drawn by every load, after curtailment.

        Parameters
        ----------
        hour
            The hour of the day.
        vmag
            The voltage magnitude at each load node, in per unit.
        chi
            The curtailed fraction of each load.

        Returns
        -------
        ``np.ndarray``
            The active power of each load, in kW.
        ``np.ndarray``
            The reactive power of each load, in kvar.

        Raises
        ------
        ValueError
            If the hour is not within the day.
        """
        _check_hour(hour)

        ratio = np.asarray(vmag)[self.columns] / self.ref_voltages
        coef_p, coef_q = self.coef_p, self.coef_q
        remaining = 1 - np.asarray(chi, dtype=float)

        p = self.p0[:, hour] * (
            coef_p[:, 0] * ratio**2 + coef_p[:, 1] * ratio + coef_p[:, 2]
        )
        q = self.q0[:, hour] * (
            coef_q[:, 0] * ratio**2 + coef_q[:, 1] * ratio + coef_q[:, 2]
        )

        return remaining * p, remaining * q

    def bus_power(self, hour: int, vmag: np.ndarray, chi: np.ndarray) -> np.ndarray:
        """
        Compute the complex power drawn at every load node.

        Parameters
        ----------
        hour
            The hour of the day.
        vmag
            The voltage magnitude at each load node, in per unit.
        chi
            The curtailed fraction of each load.

        Returns
        -------
        ``np.ndarray``
            The complex power of each load node, in kVA.
        """
        p, q = self.injections(hour, vmag, chi)

        return np.bincount(
            self.columns, weights=p, minlength=self.column_count
        ) + 1j * np.bincount(self.columns, weights=q, minlength=self.column_count)

    def baseline_total_kw(self, hour: int) -> float:
        """
        Get the total baseline active power of one hour.

        Parameters
        ----------
        hour
            The hour of the day.

        Returns
        -------
        ``float``
            The total baseline active power, in kW.
        """
        _check_hour(hour)

        return float(self.p0[:, hour].sum())

    def curtailment_cost(self, hour: int, chi: np.ndarray) -> float:
        """
        Compute the penalty paid for curtailment, ``Σ ρ_i·χ_i·P⁰_i``.

        Parameters
        ----------
        hour
            The hour of the day.
        chi
            The curtailed fraction of each load.

        Returns
        -------
        ``float``
            The curtailment cost, in USD.
        """
        _check_hour(hour)

        return float(np.sum(self.penalty_prices * np.asarray(chi) * self.p0[:, hour]))

    def curtailed_kw(self, hour: int, chi: np.ndarray) -> np.ndarray:
        """
        Get the curtailed baseline power of each load, ``χ_i·P⁰_i``.

        Parameters
        ----------
        hour
            The hour of the day.
        chi
            The curtailed fraction of each load.

        Returns
        -------
        ``np.ndarray``
            The curtailed power of each load, in kW.
        """
        _check_hour(hour)

        return np.asarray(chi) * self.p0[:, hour]

    def scaled(self, factor: float) -> "LoadTable":
        """
        Scale all baseline profiles, e.g. to apply a demand factor.

        Parameters
        ----------
        factor
            The multiplier.

        Returns
        -------
        ``LoadTable``
            A new load table with scaled profiles.

        Raises
        ------
        ValueError
            If the factor is negative.
        """
        if factor < 0:
            msg = f"Demand factor must not be negative (got {factor})."
            raise ValueError(msg)

        loads = tuple(
            replace(
                load,
                baseline_p=tuple(factor * p for p in load.baseline_p),
                baseline_q=tuple(factor * q for q in load.baseline_q),
            )
            for load in self.loads
        )

        return replace(self, loads=loads, p0=self.p0 * factor, q0=self.q0 * factor)
