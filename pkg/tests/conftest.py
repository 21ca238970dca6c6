from pathlib import Path

import numpy as np
import pytest

from gridpeak.grid import (
    Branch,
    Bus,
    BusKind,
    ConductorClass,
    RadialNetwork,
    build_bibc,
    load_feeder,
)
from gridpeak.load import LoadTable, ZipCoefficients, ZipLoad
from gridpeak.optimize import SwarmConfig
from gridpeak.powerflow import build_upsilon
from gridpeak.scenario import RunSettings, ScenarioConfig, resource_path

TEST_DATA_DIR = Path("tests/test_data")


def flat_profile(value: float) -> tuple[float, ...]:
    return tuple([float(value)] * 24)


def make_load(
    bus,
    p_kw,
    q_kvar,
    coefficients=None,
    *,
    curtailable=False,
    penalty_price=0.0,
):
    return ZipLoad(
        bus=bus,
        baseline_p=flat_profile(p_kw),
        baseline_q=flat_profile(q_kvar),
        coefficients=coefficients or ZipCoefficients.constant_power(),
        curtailable=curtailable,
        penalty_price=penalty_price,
    )


def make_two_bus(impedance=0.01 + 0.02j, rating=1000.0, thermal=None):
    return RadialNetwork(
        buses=(Bus(id=1, kind=BusKind.SUBSTATION), Bus(id=2)),
        branches=(
            Branch(
                id=1,
                from_bus=1,
                to_bus=2,
                impedance=impedance,
                conductor_class=ConductorClass.OVERHEAD,
                static_rating=rating,
                thermal=thermal,
            ),
        ),
    )


def make_system(network, loads):
    bibc = build_bibc(network)
    upsilon = build_upsilon(network, bibc)
    table = LoadTable.from_loads(loads, network)

    return bibc, upsilon, table


def random_radial(seed, n_buses, *, with_loads=True):
    """A random radial tree with shuffled labels, orientations and branch order."""
    rng = np.random.default_rng(seed)
    labels = [int(label) for label in rng.permutation(np.arange(1, n_buses + 1)) * 3]

    buses = [Bus(id=labels[0], kind=BusKind.SUBSTATION)]
    buses.extend(Bus(id=label) for label in labels[1:])

    branch_ids = [int(i) for i in rng.permutation(n_buses - 1) + 100]
    branches = []

    for i in range(1, n_buses):
        parent = labels[int(rng.integers(0, i))]
        child = labels[i]
        from_bus, to_bus = (parent, child) if rng.random() < 0.5 else (child, parent)

        branches.append(
            Branch(
                id=branch_ids[i - 1],
                from_bus=from_bus,
                to_bus=to_bus,
                impedance=complex(rng.uniform(0.002, 0.02), rng.uniform(0.002, 0.02)),
            )
        )

    bus_order = rng.permutation(len(buses))
    branch_order = rng.permutation(len(branches))

    network = RadialNetwork(
        buses=tuple(buses[i] for i in bus_order),
        branches=tuple(branches[i] for i in branch_order),
    )

    if not with_loads:
        return network, None

    loads = []

    for label in labels[1:]:
        cz_p, ci_p, cp_p = rng.dirichlet([1.0, 1.0, 1.0])
        cz_q, ci_q, cp_q = rng.dirichlet([1.0, 1.0, 1.0])
        p_kw = rng.uniform(50, 400)

        loads.append(
            make_load(
                label,
                p_kw,
                p_kw * rng.uniform(0.1, 0.4),
                ZipCoefficients(
                    cz_p=cz_p,
                    ci_p=ci_p,
                    cp_p=1 - cz_p - ci_p,
                    cz_q=cz_q,
                    ci_q=ci_q,
                    cp_q=1 - cz_q - ci_q,
                ),
            )
        )

    return network, LoadTable.from_loads(loads, network)


# Arrange
@pytest.fixture(scope="session")
def feeder5_path():
    return resource_path("feeder5.json")


# Arrange
@pytest.fixture(scope="session")
def feeder20_path():
    return resource_path("feeder20.json")


# Arrange
@pytest.fixture(scope="session")
def feeder5(feeder5_path):
    return load_feeder(feeder5_path)


# Arrange
@pytest.fixture(scope="session")
def feeder20(feeder20_path):
    return load_feeder(feeder20_path)


# Arrange
@pytest.fixture(scope="session")
def feeder5_system(feeder5):
    network, loads = feeder5
    bibc = build_bibc(network)

    return network, bibc, build_upsilon(network, bibc), loads


# Arrange
@pytest.fixture(scope="session")
def feeder20_system(feeder20):
    network, loads = feeder20
    bibc = build_bibc(network)

    return network, bibc, build_upsilon(network, bibc), loads


# Arrange
@pytest.fixture
def small_swarm():
    return SwarmConfig(particle_count=12, max_iterations=25, seed=0)


def make_scenario(output_dir, network="feeder5.json", **settings):
    values = {
        "event_hours": [17, 18],
        "voltage_hours": [17],
        "swarm": {"particle_count": 10, "max_iterations": 15, "seed": 3},
    }
    values.update(settings)

    return ScenarioConfig(
        network_path=resource_path(network),
        weather_path=resource_path("weather_cool_windy.csv"),
        prices_path=resource_path("prices.csv"),
        output_dir=output_dir,
        settings=RunSettings.model_validate(values),
    )
