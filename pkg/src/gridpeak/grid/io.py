"""Reading networks and loads from ``gridpeak-net/1`` JSON files."""

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Literal

import pydantic

from gridpeak.exceptions import NetworkFileError, TopologyError
from gridpeak.grid.network import Branch, Bus, BusKind, ConductorClass, RadialNetwork
from gridpeak.grid.topology import validate_radial
from gridpeak.load import LoadTable, ZipCoefficients, ZipLoad
from gridpeak.thermal import (
    REFERENCE_WEATHER,
    LineHeatBalance,
    ThermalLadderSpec,
    calibrate_resistance,
)

logger = logging.getLogger(__name__)

NETWORK_FILE_VERSION = "gridpeak-net/1"

THERMAL_DEFAULTS = {
    ConductorClass.TRANSFORMER: ThermalLadderSpec(
        time_constants=(4.0,),
        loop_resistances=((1.0,),),
        hot_spot_gradient=0.35,
    ),
    ConductorClass.OVERHEAD: ThermalLadderSpec(
        time_constants=(0.25,),
        loop_resistances=((1.0,),),
        heat_balance=LineHeatBalance(),
    ),
    ConductorClass.UNDERGROUND: ThermalLadderSpec(
        time_constants=(8.0,),
        loop_resistances=((1.0,),),
        dielectric_rise=(2.0,),
    ),
}
"""Default thermal parameters per conductor class. Any of them can be overridden."""


class HeatBalanceFile(pydantic.BaseModel):
    """Heat balance overrides of an overhead line."""

    diameter_m: float | None = None
    conv_a: float | None = None
    conv_b: float | None = None
    emissivity: float | None = None
    absorptivity: float | None = None

    model_config = {"extra": "ignore"}


class ThermalFile(pydantic.BaseModel):
    """Thermal overrides of a branch. Fields that are not set keep their default."""

    tau_h: list[pydantic.PositiveFloat] | None = None
    """Time constant of each ladder loop, in hours."""

    loop_resistances: list[list[float]] | None = None
    """Control parameters per node and loop."""

    hot_spot_limit_c: pydantic.PositiveFloat | None = None
    dielectric_rise_c: list[float] | None = None
    r0_ohm: pydantic.PositiveFloat | None = None
    """Conductor resistance. Calibrated to the static rating when not provided."""

    alpha: float | None = None
    theta_ref_c: float | None = None
    hot_spot_gradient: pydantic.NonNegativeFloat | None = None
    heat_balance: HeatBalanceFile | None = None

    model_config = {"extra": "ignore"}


class BusFile(pydantic.BaseModel):
    """A bus, as it appears in a network file."""

    id: int
    kind: Literal["substation", "load-node"] = "load-node"
    kv: pydantic.PositiveFloat | None = None

    model_config = {"extra": "ignore"}


class BranchFile(pydantic.BaseModel):
    """A branch, as it appears in a network file."""

    id: int
    from_bus: int = pydantic.Field(alias="from")
    to_bus: int = pydantic.Field(alias="to")
    r_ohm: pydantic.NonNegativeFloat
    x_ohm: float
    conductor_class: Literal["overhead", "underground", "transformer"] = (
        pydantic.Field(default="overhead", alias="class")
    )
    static_rating_a: pydantic.PositiveFloat
    thermal: ThermalFile = pydantic.Field(default_factory=ThermalFile)

    model_config = {"extra": "ignore", "populate_by_name": True}


class ZipFile(pydantic.BaseModel):
    """ZIP coefficients, as they appear in a network file."""

    czp: float = 0.0
    cip: float = 0.0
    cpp: float = 1.0
    czq: float = 0.0
    ciq: float = 0.0
    cpq: float = 1.0

    model_config = {"extra": "ignore"}


class LoadFile(pydantic.BaseModel):
    """A load, as it appears in a network file."""

    bus: int
    p0_kw: list[float]
    q0_kvar: list[float]
    v0_pu: float = 1.0
    zip: ZipFile = pydantic.Field(default_factory=ZipFile)
    curtailable: bool = False
    penalty_usd_per_kw: float = 0.0

    model_config = {"extra": "ignore"}


class NetworkFile(pydantic.BaseModel):
    """The contents of a ``gridpeak-net/1`` network file."""

    version: Literal["gridpeak-net/1"]
    base_mva: pydantic.PositiveFloat
    base_kv: pydantic.PositiveFloat
    buses: list[BusFile]
    branches: list[BranchFile]
    loads: list[LoadFile] = []

    model_config = {"extra": "ignore"}


def read_network_file(path: str | Path) -> NetworkFile:
    """
    Read and parse a network file, without building a network from it.

    Parameters
    ----------
    path
        The path to the file.

    Returns
    -------
    ``NetworkFile``
        The parsed file.

    Raises
    ------
    NetworkFileError
        If the file is not valid JSON, or does not conform to the schema.
    """
    try:
        with Path(path).open(encoding="utf-8") as file:
            contents = json.load(file)
    except json.JSONDecodeError as e:
        msg = f"Cannot parse network file {path}: {e}"
        raise NetworkFileError(msg) from e

    try:
        return NetworkFile.model_validate(contents)
    except pydantic.ValidationError as e:
        msg = f"Network file {path} does not conform to {NETWORK_FILE_VERSION}: {e}"
        raise NetworkFileError(msg) from e


def _check_references(contents: NetworkFile) -> None:
    """
    Check that every branch and load refers to a known bus.

    Raises
    ------
    NetworkFileError
        If a branch or load refers to an unknown bus.
    """
    bus_ids = {bus.id for bus in contents.buses}

    for branch in contents.branches:
        unknown = sorted({branch.from_bus, branch.to_bus} - bus_ids)

        if unknown:
            msg = f"Branch {branch.id} refers to unknown bus(es) {unknown}."
            raise NetworkFileError(msg)

    for load in contents.loads:
        if load.bus not in bus_ids:
            msg = f"Load refers to unknown bus {load.bus}."
            raise NetworkFileError(msg)


def _check_voltage_levels(contents: NetworkFile) -> None:
    """
    Check that buses off the base voltage only connect through transformers.

    Raises
    ------
    NetworkFileError
        If a branch other than a transformer connects a bus off the base voltage.
    """
    levels = {bus.id: bus.kv or contents.base_kv for bus in contents.buses}

    for branch in contents.branches:
        if branch.conductor_class == "transformer":
            continue

        for bus_id in (branch.from_bus, branch.to_bus):
            kv = levels.get(bus_id, contents.base_kv)

            if abs(kv - contents.base_kv) > 1e-9:
                msg = (
                    f"Unit inconsistency: bus {bus_id} is at {kv} kV, but connects to "
                    f"{branch.conductor_class} branch {branch.id} on the "
                    f"{contents.base_kv} kV base."
                )
                raise NetworkFileError(msg)


def build_thermal(branch: BranchFile) -> ThermalLadderSpec:
    """
    Build the thermal parameters of a branch from its class defaults and overrides.

    When the file does not provide a conductor resistance, it is calibrated so the
    steady ampacity at the reference weather equals the static rating.

    Parameters
    ----------
    branch
        The branch, as it appears in the network file.

    Returns
    -------
    ``ThermalLadderSpec``
        The thermal parameters.
    """
    spec = THERMAL_DEFAULTS[ConductorClass(branch.conductor_class)]
    thermal = branch.thermal
    overrides = {}

    if thermal.tau_h is not None:
        overrides["time_constants"] = tuple(thermal.tau_h)

    if thermal.loop_resistances is not None:
        overrides["loop_resistances"] = tuple(
            tuple(row) for row in thermal.loop_resistances
        )

    if thermal.dielectric_rise_c is not None:
        overrides["dielectric_rise"] = tuple(thermal.dielectric_rise_c)

    for field, name in (
        ("hot_spot_limit_c", "hot_spot_limit"),
        ("alpha", "alpha"),
        ("theta_ref_c", "theta_ref"),
        ("hot_spot_gradient", "hot_spot_gradient"),
    ):
        if getattr(thermal, field) is not None:
            overrides[name] = getattr(thermal, field)

    if thermal.heat_balance is not None:
        overrides["heat_balance"] = replace(
            spec.heat_balance or LineHeatBalance(),
            **thermal.heat_balance.model_dump(exclude_none=True),
        )

    spec = replace(spec, **overrides)

    if thermal.r0_ohm is not None:
        return replace(spec, r0=thermal.r0_ohm)

    r0 = calibrate_resistance(spec, branch.static_rating_a, REFERENCE_WEATHER)
    logger.debug("Calibrated r0 of branch %d to %.3e.", branch.id, r0)

    return replace(spec, r0=r0)


def network_from_file(contents: NetworkFile) -> RadialNetwork:
    """
    Build a network from a parsed network file.

    Parameters
    ----------
    contents
        The parsed network file.

    Returns
    -------
    ``RadialNetwork``
        The network, with impedances converted to per unit.

    Raises
    ------
    NetworkFileError
        If the file is internally inconsistent.
    TopologyError
        If the network is not a valid radial tree.
    """
    _check_references(contents)
    _check_voltage_levels(contents)

    base_impedance = contents.base_kv**2 / contents.base_mva

    try:
        buses = tuple(
            Bus(
                id=bus.id,
                kind=BusKind(bus.kind),
                nominal_voltage=bus.kv or contents.base_kv,
            )
            for bus in contents.buses
        )
        branches = tuple(
            Branch(
                id=branch.id,
                from_bus=branch.from_bus,
                to_bus=branch.to_bus,
                impedance=complex(branch.r_ohm, branch.x_ohm) / base_impedance,
                conductor_class=ConductorClass(branch.conductor_class),
                static_rating=branch.static_rating_a,
                thermal=build_thermal(branch),
            )
            for branch in contents.branches
        )
    except ValueError as e:
        msg = f"Invalid network: {e}"
        raise NetworkFileError(msg) from e

    network = RadialNetwork(
        buses=buses,
        branches=branches,
        base_power=contents.base_mva,
        base_voltage=contents.base_kv,
    )

    report = validate_radial(network)

    if not report.is_valid:
        msg = f"Network is not a valid radial tree: {report}"
        raise TopologyError(msg)

    return network


def loads_from_file(contents: NetworkFile, network: RadialNetwork) -> LoadTable:
    """
    Build the load table from a parsed network file.

    Parameters
    ----------
    contents
        The parsed network file.
    network
        The network the loads connect to.

    Returns
    -------
    ``LoadTable``
        The loads.

    Raises
    ------
    NetworkFileError
        If any load is invalid, or connects to a bus that is not a load node.
    """
    try:
        loads = [
            ZipLoad(
                bus=load.bus,
                baseline_p=tuple(load.p0_kw),
                baseline_q=tuple(load.q0_kvar),
                ref_voltage=load.v0_pu,
                coefficients=ZipCoefficients(
                    cz_p=load.zip.czp,
                    ci_p=load.zip.cip,
                    cp_p=load.zip.cpp,
                    cz_q=load.zip.czq,
                    ci_q=load.zip.ciq,
                    cp_q=load.zip.cpq,
                ),
                curtailable=load.curtailable,
                penalty_price=load.penalty_usd_per_kw,
            )
            for load in contents.loads
        ]

        return LoadTable.from_loads(loads, network)
    except ValueError as e:
        msg = f"Invalid load: {e}"
        raise NetworkFileError(msg) from e


def load_network(path: str | Path) -> RadialNetwork:
    """
    Load a network from a ``gridpeak-net/1`` JSON file.

    Parameters
    ----------
    path
        The path to the file.

    Returns
    -------
    ``RadialNetwork``
        The network, with impedances converted to per unit.

    Raises
    ------
    NetworkFileError
        If the file cannot be parsed, violates the schema, or is inconsistent.
    TopologyError
        If the network is not a valid radial tree.
    """
    return network_from_file(read_network_file(path))


def load_loads(path: str | Path, network: RadialNetwork) -> LoadTable:
    """
    Load the loads from a ``gridpeak-net/1`` JSON file.

    Parameters
    ----------
    path
        The path to the file.
    network
        The network the loads connect to, usually loaded from the same file.

    Returns
    -------
    ``LoadTable``
        The loads.
    """
    return loads_from_file(read_network_file(path), network)


def load_feeder(path: str | Path) -> tuple[RadialNetwork, LoadTable]:
    """
    Load a network and its loads from one file.

    Parameters
    ----------
    path
        The path to the file.

    Returns
    -------
    ``RadialNetwork``
        The network.
    ``LoadTable``
        The loads.
    """
    contents = read_network_file(path)
    network = network_from_file(contents)

    return network, loads_from_file(contents, network)
