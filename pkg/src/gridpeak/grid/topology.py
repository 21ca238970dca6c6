"""Topology checks and the bus injection to branch current (BIBC) matrix."""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx
import numpy as np

from gridpeak.exceptions import TopologyError
from gridpeak.grid.network import BusKind, RadialNetwork


class ViolationKind(Enum):
    """Kinds of topology violations."""

    CYCLE = "cycle"
    DISCONNECTED = "disconnected"
    DUPLICATE_BUS = "duplicate_bus"
    DUPLICATE_BRANCH = "duplicate_branch"
    MISSING_SUBSTATION = "missing_substation"
    MULTIPLE_SUBSTATIONS = "multiple_substations"
    UNKNOWN_BUS = "unknown_bus"


@dataclass(frozen=True)
class Violation:
    """A single topology violation."""

    kind: ViolationKind
    """The kind of violation."""

    detail: str
    """A human readable description."""

    def __str__(self) -> str:
        """
        Get the string representation of the violation.

        Returns
        -------
        ``str``
            The kind and detail of the violation.
        """
        return f"{self.kind.value}: {self.detail}"


@dataclass
class ValidationReport:
    """The outcome of a topology check. An empty report means a valid network."""

    violations: list[Violation] = field(default_factory=list)
    """The violations found."""

    @property
    def is_valid(self) -> bool:
        """Whether no violations were found."""
        return len(self.violations) == 0

    @property
    def kinds(self) -> set[ViolationKind]:
        """The distinct kinds of violations found."""
        return {violation.kind for violation in self.violations}

    def __len__(self) -> int:
        """
        Get the number of violations.

        Returns
        -------
        ``int``
            The number of violations.
        """
        return len(self.violations)

    def __str__(self) -> str:
        """
        Get the string representation of the report.

        Returns
        -------
        ``str``
            All violations, separated by semicolons.
        """
        return "; ".join(str(violation) for violation in self.violations)


def validate_radial(network: RadialNetwork) -> ValidationReport:
    """
    Check that a network is a single radial tree, fed from one substation.

    Parameters
    ----------
    network
        The network to check.

    Returns
    -------
    ``ValidationReport``
        All violations found. Violations are reported, never raised.
    """
    report = ValidationReport()

    bus_counts = Counter(bus.id for bus in network.buses)
    branch_counts = Counter(branch.id for branch in network.branches)

    for bus_id, count in bus_counts.items():
        if count > 1:
            report.violations.append(
                Violation(ViolationKind.DUPLICATE_BUS, f"bus {bus_id} occurs {count}x")
            )

    for branch_id, count in branch_counts.items():
        if count > 1:
            report.violations.append(
                Violation(
                    ViolationKind.DUPLICATE_BRANCH,
                    f"branch {branch_id} occurs {count}x",
                )
            )

    substations = [bus.id for bus in network.buses if bus.kind == BusKind.SUBSTATION]

    if len(substations) == 0:
        report.violations.append(
            Violation(ViolationKind.MISSING_SUBSTATION, "no substation bus")
        )
    elif len(substations) > 1:
        report.violations.append(
            Violation(
                ViolationKind.MULTIPLE_SUBSTATIONS, f"substations at {substations}"
            )
        )

    graph = nx.MultiGraph()
    graph.add_nodes_from(bus_counts)

    for branch in network.branches:
        unknown = sorted(branch.buses - bus_counts.keys())

        if unknown:
            report.violations.append(
                Violation(
                    ViolationKind.UNKNOWN_BUS,
                    f"branch {branch.id} refers to unknown bus(es) {unknown}",
                )
            )
            continue

        graph.add_edge(branch.from_bus, branch.to_bus, key=branch.id)

    for cycle in nx.cycle_basis(nx.Graph(graph)):
        report.violations.append(
            Violation(ViolationKind.CYCLE, f"cycle through buses {sorted(cycle)}")
        )

    for u, v in {(min(u, v), max(u, v)) for u, v in graph.edges()}:
        if graph.number_of_edges(u, v) > 1:
            report.violations.append(
                Violation(ViolationKind.CYCLE, f"parallel branches between {u}-{v}")
            )

    components = list(nx.connected_components(graph))

    if len(components) > 1:
        root = substations[0] if substations else None

        for component in components:
            if root not in component:
                report.violations.append(
                    Violation(
                        ViolationKind.DISCONNECTED,
                        f"buses {sorted(component)} are not connected to the "
                        f"substation",
                    )
                )

    return report


@dataclass(frozen=True)
class BibcMatrix:
    """
    The BIBC matrix ``Ψ``, mapping load node injections to section currents.

    Entry ``(s, n)`` is 1 when load node ``n`` lies downstream of section ``s``.
    """

    entries: np.ndarray
    """The 0/1 matrix, shaped ``(sections, load nodes)``."""

    section_ids: tuple[int, ...]
    """The branch label of each row."""

    node_ids: tuple[int, ...]
    """The bus label of each column."""

    strip_order: tuple[int, ...] = ()
    """The buses in the order in which they were stripped as leaves."""

    @property
    def shape(self) -> tuple[int, int]:
        """The matrix shape."""
        return self.entries.shape

    @property
    def depths(self) -> np.ndarray:
        """The number of sections between the substation and each load node."""
        return self.entries.sum(axis=0)


def build_bibc(network: RadialNetwork) -> BibcMatrix:
    """
    Build the BIBC matrix by repeatedly stripping leaf nodes from the tree.

    Every round finds all leaves (except the substation), marks the section to
    their parent as feeding the leaf and everything collected below it, and removes
    that section. Bus and branch labels may be in any order.

    Parameters
    ----------
    network
        The network. Must be radial.

    Returns
    -------
    ``BibcMatrix``
        The BIBC matrix. Rows follow the branch order, columns follow
        ``network.load_buses``.

    Raises
    ------
    TopologyError
        If the network is not radial.
    """
    if len(network.branches) != len(network.buses) - 1:
        msg = (
            f"A radial network with {len(network.buses)} buses has "
            f"{len(network.buses) - 1} branches, not {len(network.branches)}."
        )
        raise TopologyError(msg)

    substations = [bus for bus in network.buses if bus.kind == BusKind.SUBSTATION]

    if len(substations) != 1:
        msg = f"A radial network needs one substation, not {len(substations)}."
        raise TopologyError(msg)

    try:
        adjacency = network.adjacency.copy()
    except KeyError as e:
        msg = f"A branch refers to unknown bus {e}."
        raise TopologyError(msg) from e

    index = network.bus_index
    substation = index[network.substation.id]
    column = {index[bus_id]: col for bus_id, col in network.load_index.items()}
    section = {}

    for row, branch in enumerate(network.branches):
        section[(index[branch.from_bus], index[branch.to_bus])] = row
        section[(index[branch.to_bus], index[branch.from_bus])] = row

    entries = np.zeros((len(network.branches), len(network.load_buses)), dtype=np.int8)
    downstream = [[] for _ in network.buses]
    strip_order = []

    while True:
        degree = adjacency.sum(axis=1)
        leaves = [r for r in np.flatnonzero(degree == 1) if r != substation]

        if len(leaves) == 0:
            break

        for r in leaves:
            parents = np.flatnonzero(adjacency[:, r])

            if len(parents) == 0:
                continue

            s = parents[0]
            downstream[r].append(column[r])
            entries[section[(s, r)], downstream[r]] = 1
            adjacency[s, r] = adjacency[r, s] = 0
            downstream[s].extend(downstream[r])
            strip_order.append(network.buses[r].id)

    if len(strip_order) != len(network.branches) or adjacency.any():
        msg = "The network is not a radial tree fed from its substation."
        raise TopologyError(msg)

    return BibcMatrix(
        entries=entries,
        section_ids=tuple(branch.id for branch in network.branches),
        node_ids=network.load_buses,
        strip_order=tuple(strip_order),
    )
