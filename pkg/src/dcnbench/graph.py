"""Core topology model: nodes, capacitated links, adjacency, and edge-list I/O.

Every builder, metric, router, and simulator in this package works on the
immutable :class:`Topology` defined here. Node ids are dense integers with
hosts first, so host index arithmetic (traffic patterns, bisection splits)
is stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

DEFAULT_CAPACITY = 1.0
DEFAULT_LATENCY = 10  # cycles, off-chip link propagation


class NodeKind(Enum):
    HOST = "host"
    SWITCH = "switch"


class AddressScheme(Enum):
    FAT_TREE_POD = "fattreepod"
    DCELL_COORD = "dcellcoord"
    BCUBE_DIGITS = "bcubedigits"
    FLAT = "flat"


@dataclass(frozen=True)
class Address:
    """Topology-specific coordinate vector, e.g. BCube digits or pod/position."""

    digits: tuple[int, ...] = ()
    scheme: AddressScheme = AddressScheme.FLAT


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    radix: int
    address: Address = field(default_factory=Address)
    label: str = ""

    @property
    def is_host(self) -> bool:
        return self.kind is NodeKind.HOST


@dataclass(frozen=True)
class Link:
    """Undirected duplex link, simulated as two independent simplex channels."""

    a: int
    b: int
    capacity: float = DEFAULT_CAPACITY
    latency: int = DEFAULT_LATENCY


@dataclass(frozen=True)
class TaxonomyRecord:
    """Classification of a topology along the survey's design axes."""

    build_approach: str  # "random" | "deterministic"
    centricity: str  # "server-centric" | "switch-centric"
    directness: str  # "direct" | "indirect"
    symmetric: bool
    extensible: bool
    deployment: str  # "modular" | "non-modular"
    blocking: str  # "non-blocking" | "blocking"
    tiers: str  # "flat" | "fixed(<n>)" | "n-tier"


class TopologyError(Exception):
    """Raised when a topology cannot be built or parsed."""


class EdgeListParseError(TopologyError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ValidationError(TopologyError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class Topology:
    """Immutable graph of hosts and switches with capacitated links.

    ``adjacency[v]`` lists ``(neighbor, link_index)`` pairs in link insertion
    order. Construction is single-threaded; once built, a topology is safe to
    share read-only across concurrent analyses.
    """

    def __init__(
        self,
        nodes: Sequence[Node],
        links: Sequence[Link],
        taxonomy: Optional[TaxonomyRecord] = None,
        builder_params: Optional[dict] = None,
    ):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.links: tuple[Link, ...] = tuple(links)
        self.taxonomy = taxonomy
        self.builder_params: dict = dict(builder_params or {})
        adj: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
        for idx, link in enumerate(self.links):
            if 0 <= link.a < len(adj) and 0 <= link.b < len(adj):
                adj[link.a].append((link.b, idx))
                adj[link.b].append((link.a, idx))
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(entries) for entries in adj
        )

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def hosts(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind is NodeKind.HOST]

    @property
    def switches(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind is NodeKind.SWITCH]

    @property
    def num_hosts(self) -> int:
        return sum(1 for n in self.nodes if n.kind is NodeKind.HOST)

    @property
    def num_switches(self) -> int:
        return sum(1 for n in self.nodes if n.kind is NodeKind.SWITCH)

    def degree(self, node_id: int) -> int:
        return len(self.adjacency[node_id])

    def neighbors(self, node_id: int) -> list[int]:
        return [nb for nb, _ in self.adjacency[node_id]]

    def name(self) -> str:
        return self.builder_params.get("builder", "custom")

    def __repr__(self) -> str:
        return (
            f"Topology({self.name()}: {self.num_hosts} hosts, "
            f"{self.num_switches} switches, {len(self.links)} links)"
        )


def connected_components(topology: Topology) -> list[list[int]]:
    """Connected components as sorted node-id lists, over all nodes."""
    seen = [False] * topology.num_nodes
    comps = []
    for start in range(topology.num_nodes):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for nb, _ in topology.adjacency[v]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        comps.append(sorted(comp))
    return comps


def validate(topology: Topology) -> list[str]:
    """Check structural invariants, returning a list of violations.

    Violations are data, not failures: an empty list means the topology is
    well-formed. Checks: radix exceeded, duplicate links, self loops,
    disconnected components, and per-scheme address length consistency.
    """
    violations = []
    for node in topology.nodes:
        deg = topology.degree(node.id)
        if deg > node.radix:
            violations.append(
                f"radix exceeded: node {node.id} has degree {deg} > radix {node.radix}"
            )
    seen_pairs = set()
    for idx, link in enumerate(topology.links):
        if link.a == link.b:
            violations.append(f"self-loop: link {idx} on node {link.a}")
            continue
        pair = (min(link.a, link.b), max(link.a, link.b))
        if pair in seen_pairs:
            violations.append(f"duplicate link: {pair[0]}-{pair[1]} (link {idx})")
        seen_pairs.add(pair)
        if link.capacity <= 0:
            violations.append(f"non-positive capacity on link {idx}")
        if link.latency < 1:
            violations.append(f"latency < 1 on link {idx}")
    if topology.num_nodes > 1:
        comps = connected_components(topology)
        if len(comps) > 1:
            violations.append(f"disconnected: {len(comps)} components")
    scheme_lengths: dict[AddressScheme, int] = {}
    for node in topology.nodes:
        addr = node.address
        if addr.scheme is AddressScheme.FLAT and not addr.digits:
            continue
        want = scheme_lengths.setdefault(addr.scheme, len(addr.digits))
        if len(addr.digits) != want:
            violations.append(
                f"address-scheme inconsistency: node {node.id} has "
                f"{len(addr.digits)} digits, expected {want} for {addr.scheme.value}"
            )
    return violations


def _format_capacity(value: float) -> str:
    # up to 6 decimal places, trailing zeros stripped
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return text if text else "0"


def export_edge_list(topology: Topology) -> str:
    """Serialize to the line-oriented edge-list format.

    One ``node <id> <kind> <radix> <address-digits>`` line per node in id
    order, then one ``link <a> <b> <capacity> <latency>`` line per link in
    insertion order. Round-trips through :func:`import_edge_list`.
    """
    lines = []
    for node in topology.nodes:
        digits = ",".join(str(d) for d in node.address.digits) or "-"
        lines.append(f"node {node.id} {node.kind.value} {node.radix} {digits}")
    for link in topology.links:
        lines.append(
            f"link {link.a} {link.b} {_format_capacity(link.capacity)} {link.latency}"
        )
    return "\n".join(lines) + "\n"


def import_edge_list(text: str) -> Topology:
    """Parse the edge-list format back into a topology.

    The result carries no taxonomy (imported topologies are unclassified).
    Raises :class:`EdgeListParseError` with the offending line number on
    malformed input and :class:`ValidationError` if the parsed topology
    violates structural invariants (e.g. duplicate links).
    """
    nodes: list[Node] = []
    links: list[Link] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 5:
                raise EdgeListParseError(line_no, f"expected 5 fields, got {len(parts)}")
            try:
                node_id = int(parts[1])
                kind = NodeKind(parts[2])
                radix = int(parts[3])
            except ValueError as exc:
                raise EdgeListParseError(line_no, str(exc)) from exc
            if parts[4] == "-":
                digits: tuple[int, ...] = ()
            else:
                try:
                    digits = tuple(int(d) for d in parts[4].split(","))
                except ValueError as exc:
                    raise EdgeListParseError(line_no, f"bad address digits {parts[4]!r}") from exc
            if node_id != len(nodes):
                raise EdgeListParseError(
                    line_no, f"node id {node_id} out of order (expected {len(nodes)})"
                )
            nodes.append(Node(node_id, kind, radix, Address(digits), label=f"n{node_id}"))
        elif parts[0] == "link":
            if len(parts) != 5:
                raise EdgeListParseError(line_no, f"expected 5 fields, got {len(parts)}")
            try:
                a, b = int(parts[1]), int(parts[2])
                capacity = float(parts[3])
                latency = int(parts[4])
            except ValueError as exc:
                raise EdgeListParseError(line_no, str(exc)) from exc
            if not (0 <= a < len(nodes)) or not (0 <= b < len(nodes)):
                raise EdgeListParseError(line_no, f"link endpoint out of range: {a}-{b}")
            links.append(Link(a, b, capacity, latency))
        else:
            raise EdgeListParseError(line_no, f"unknown record {parts[0]!r}")
    topology = Topology(nodes, links, taxonomy=None, builder_params={"builder": "imported"})
    violations = validate(topology)
    if violations:
        raise ValidationError(violations)
    return topology


def bfs_distances(topology: Topology, source: int) -> list[int]:
    """Hop distances (in links) from ``source`` to every node; -1 if unreachable."""
    dist = [-1] * topology.num_nodes
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            dv = dist[v]
            for nb, _ in topology.adjacency[v]:
                if dist[nb] < 0:
                    dist[nb] = dv + 1
                    nxt.append(nb)
        frontier = nxt
    return dist


def make_hosts_and_switches(
    num_hosts: int,
    num_switches: int,
    host_radix: int,
    switch_radix: int,
    host_label: str = "host",
    switch_label: str = "switch",
) -> list[Node]:
    """Convenience: dense node list with hosts first, flat addresses."""
    nodes = [
        Node(i, NodeKind.HOST, host_radix, label=f"{host_label}{i}")
        for i in range(num_hosts)
    ]
    nodes += [
        Node(num_hosts + j, NodeKind.SWITCH, switch_radix, label=f"{switch_label}{j}")
        for j in range(num_switches)
    ]
    return nodes
