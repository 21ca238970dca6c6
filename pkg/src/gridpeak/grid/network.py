"""Data model of a radial distribution network."""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import networkx as nx
import numpy as np

from gridpeak.exceptions import TopologyError
from gridpeak.thermal import ThermalLadderSpec


class BusKind(Enum):
    """The role of a bus in the network."""

    SUBSTATION = "substation"
    """The (single) supply point of the network."""

    LOAD_NODE = "load-node"
    """Any other bus, which may host load points."""


class ConductorClass(Enum):
    """The kind of component a branch represents."""

    OVERHEAD = "overhead"
    UNDERGROUND = "underground"
    TRANSFORMER = "transformer"


@dataclass(frozen=True)
class Bus:
    """A node of the network."""

    id: int
    """The bus label."""

    kind: BusKind = BusKind.LOAD_NODE
    """Whether this is the substation or a load node."""

    nominal_voltage: float = 20.0
    """The nominal voltage, in kV."""


@dataclass(frozen=True)
class Branch:
    """A section of the network, connecting two buses."""

    id: int
    """The section label."""

    from_bus: int
    """The label of one of the connected buses."""

    to_bus: int
    """The label of the other connected bus."""

    impedance: complex
    """The series impedance, in per unit."""

    conductor_class: ConductorClass = ConductorClass.OVERHEAD
    """The kind of component."""

    static_rating: float = 1000.0
    """The static current rating, in A."""

    thermal: ThermalLadderSpec | None = None
    """Thermal parameters, required for dynamic ratings."""

    def __post_init__(self) -> None:
        """
        Validate the branch.

        Raises
        ------
        ValueError
            If the branch has a negative resistance, a non-positive rating, or
            connects a bus to itself.
        """
        if self.impedance.real < 0:
            msg = f"Branch {self.id} has a negative resistance."
            raise ValueError(msg)

        if self.static_rating <= 0:
            msg = f"Branch {self.id} needs a positive static rating."
            raise ValueError(msg)

        if self.from_bus == self.to_bus:
            msg = f"Branch {self.id} connects bus {self.from_bus} to itself."
            raise ValueError(msg)

    @property
    def buses(self) -> frozenset[int]:
        """The two connected buses."""
        return frozenset((self.from_bus, self.to_bus))


@dataclass(frozen=True, eq=False)
class RadialNetwork:
    """
    A distribution network, defined by its buses and branches.

    Construction does not check the topology, see ``validate_radial`` for that.
    Impedances are in per unit of ``base_power`` and ``base_voltage``.
    """

    buses: tuple[Bus, ...]
    """The buses, in input order."""

    branches: tuple[Branch, ...]
    """The branches (sections), in input order."""

    base_power: float = 10.0
    """The base power, in MVA."""

    base_voltage: float = 20.0
    """The base (line-to-line) voltage, in kV."""

    @property
    def base_current(self) -> float:
        """The base current, in A."""
        return self.base_power * 1e3 / (math.sqrt(3) * self.base_voltage)

    @property
    def base_impedance(self) -> float:
        """The base impedance, in ohm."""
        return self.base_voltage**2 / self.base_power

    @cached_property
    def substation(self) -> Bus:
        """
        The substation bus.

        Raises
        ------
        TopologyError
            If the network has no substation.
        """
        for bus in self.buses:
            if bus.kind == BusKind.SUBSTATION:
                return bus

        msg = "The network has no substation bus."
        raise TopologyError(msg)

    @cached_property
    def load_buses(self) -> tuple[int, ...]:
        """The labels of all buses except the substation, in input order."""
        return tuple(
            bus.id for bus in self.buses if bus.kind != BusKind.SUBSTATION
        )

    @cached_property
    def bus_index(self) -> dict[int, int]:
        """A mapping from bus label to its position in ``buses``."""
        return {bus.id: i for i, bus in enumerate(self.buses)}

    @cached_property
    def load_index(self) -> dict[int, int]:
        """A mapping from bus label to its position in ``load_buses``."""
        return {bus_id: i for i, bus_id in enumerate(self.load_buses)}

    @cached_property
    def adjacency(self) -> np.ndarray:
        """The adjacency matrix over ``buses``, counting parallel branches."""
        adjacency = np.zeros((len(self.buses), len(self.buses)), dtype=int)

        for branch in self.branches:
            i = self.bus_index[branch.from_bus]
            j = self.bus_index[branch.to_bus]
            adjacency[i, j] += 1
            adjacency[j, i] += 1

        return adjacency

    @cached_property
    def graph(self) -> nx.Graph:
        """The network as a graph, with branch labels on the edges."""
        graph = nx.Graph()
        graph.add_nodes_from(bus.id for bus in self.buses)

        for branch in self.branches:
            graph.add_edge(branch.from_bus, branch.to_bus, branch=branch.id)

        return graph

    @cached_property
    def bus_hops(self) -> dict[int, int]:
        """The number of branches between each bus and the substation."""
        return nx.single_source_shortest_path_length(self.graph, self.substation.id)

    @cached_property
    def branch_hops(self) -> dict[int, int]:
        """The hop count of each branch, i.e. of its bus farthest from the root."""
        return {
            branch.id: max(self.bus_hops[branch.from_bus], self.bus_hops[branch.to_bus])
            for branch in self.branches
        }

    @cached_property
    def resistances(self) -> np.ndarray:
        """The per unit resistance of every branch, in branch order."""
        return np.array([branch.impedance.real for branch in self.branches])

    def branch_by_id(self, branch_id: int) -> Branch:
        """
        Get a branch by its label.

        Parameters
        ----------
        branch_id
            The branch label.

        Returns
        -------
        ``Branch``
            The branch.

        Raises
        ------
        KeyError
            If no branch has this label.
        """
        for branch in self.branches:
            if branch.id == branch_id:
                return branch

        msg = f"No branch with id {branch_id}."
        raise KeyError(msg)
