import math

import numpy as np
import pytest

from gridpeak.exceptions import TopologyError
from gridpeak.grid import Branch, Bus, BusKind, ConductorClass, RadialNetwork


class TestBranch:
    def test_branch_buses(self):
        # Arrange
        branch = Branch(id=1, from_bus=3, to_bus=4, impedance=0.01 + 0.01j)

        # Assert
        assert branch.buses == frozenset({3, 4})
        assert branch.conductor_class == ConductorClass.OVERHEAD

    def test_negative_resistance(self):
        # Act & Assert
        with pytest.raises(ValueError, match="negative resistance"):
            Branch(id=1, from_bus=1, to_bus=2, impedance=-0.01 + 0.01j)

    def test_non_positive_rating(self):
        # Act & Assert
        with pytest.raises(ValueError, match="positive static rating"):
            Branch(id=1, from_bus=1, to_bus=2, impedance=0.01j, static_rating=0)

    def test_self_loop(self):
        # Act & Assert
        with pytest.raises(ValueError, match="to itself"):
            Branch(id=1, from_bus=2, to_bus=2, impedance=0.01j)


class TestRadialNetwork:
    def test_bases(self):
        # Arrange
        network = RadialNetwork(buses=(), branches=(), base_power=10, base_voltage=20)

        # Assert
        assert network.base_impedance == pytest.approx(40)
        assert network.base_current == pytest.approx(10e3 / (math.sqrt(3) * 20))

    def test_substation(self, feeder20):
        # Arrange
        network, _ = feeder20

        # Assert
        assert network.substation.id == 1
        assert network.substation.nominal_voltage == 110
        assert network.load_buses == tuple(range(2, 21))

    def test_missing_substation(self):
        # Arrange
        network = RadialNetwork(buses=(Bus(id=1), Bus(id=2)), branches=())

        # Act & Assert
        with pytest.raises(TopologyError, match="no substation"):
            _ = network.substation

    def test_hops(self, feeder20):
        # Arrange
        network, _ = feeder20

        # Assert
        assert network.bus_hops[1] == 0
        assert network.bus_hops[2] == 1
        assert network.bus_hops[17] == 4
        assert network.branch_hops[1] == 1
        assert network.branch_hops[14] == 2
        assert network.branch_hops[7] == 7

    def test_adjacency(self):
        # Arrange
        network = RadialNetwork(
            buses=(Bus(id=5, kind=BusKind.SUBSTATION), Bus(id=7), Bus(id=9)),
            branches=(
                Branch(id=1, from_bus=5, to_bus=7, impedance=0.01j),
                Branch(id=2, from_bus=9, to_bus=7, impedance=0.01j),
            ),
        )

        # Act
        adjacency = network.adjacency

        # Assert
        np.testing.assert_array_equal(adjacency, [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        assert network.load_index == {7: 0, 9: 1}

    def test_resistances(self, feeder5):
        # Arrange
        network, _ = feeder5

        # Assert
        np.testing.assert_allclose(network.resistances, [0.02, 0.03, 0.03, 0.025])

    def test_branch_by_id(self, feeder5):
        # Arrange
        network, _ = feeder5

        # Assert
        assert network.branch_by_id(4).to_bus == 5

        with pytest.raises(KeyError, match="No branch"):
            network.branch_by_id(99)
