"""Constructors for the surveyed data-center topologies.

All builders are pure functions of their parameters (and seed, for the
randomized ones), assign node ids hosts-first in a canonical order, and
attach the taxonomy record matching the survey's classification tables.
"""

from __future__ import annotations

import os
import random
from typing import Optional

from .graph import (
    Address,
    AddressScheme,
    DEFAULT_CAPACITY,
    DEFAULT_LATENCY,
    Link,
    Node,
    NodeKind,
    TaxonomyRecord,
    Topology,
    TopologyError,
)

DEFAULT_SIZE_CAP = 100_000


class SizeCapError(TopologyError):
    """Requested topology exceeds the configured node cap."""


def size_cap() -> int:
    return int(os.environ.get("DCNBENCH_SIZE_CAP", DEFAULT_SIZE_CAP))


def _check_cap(num_nodes: int, what: str) -> None:
    cap = size_cap()
    if num_nodes > cap:
        raise SizeCapError(
            f"{what} needs {num_nodes} nodes, above the cap of {cap} "
            f"(override with DCNBENCH_SIZE_CAP)"
        )


FAT_TREE_TAXONOMY = TaxonomyRecord(
    build_approach="deterministic",
    centricity="switch-centric",
    directness="indirect",
    symmetric=True,
    extensible=False,
    deployment="non-modular",
    blocking="non-blocking",
    tiers="fixed(3)",
)

DCELL_TAXONOMY = TaxonomyRecord(
    build_approach="deterministic",
    centricity="server-centric",
    directness="direct",
    symmetric=False,
    extensible=False,
    deployment="non-modular",
    blocking="blocking",
    tiers="n-tier",
)

BCUBE_TAXONOMY = TaxonomyRecord(
    build_approach="deterministic",
    centricity="server-centric",
    directness="direct",
    symmetric=True,
    extensible=False,
    deployment="modular",
    blocking="blocking",
    tiers="n-tier",
)

MDCUBE_TAXONOMY = TaxonomyRecord(
    build_approach="deterministic",
    centricity="server-centric",
    directness="direct",
    symmetric=True,
    extensible=False,
    deployment="modular",
    blocking="blocking",
    tiers="n-tier",
)

JELLYFISH_TAXONOMY = TaxonomyRecord(
    build_approach="random",
    centricity="switch-centric",
    directness="direct",
    symmetric=False,
    extensible=True,
    deployment="non-modular",
    blocking="blocking",
    tiers="flat",
)

SCAFIDA_TAXONOMY = TaxonomyRecord(
    build_approach="random",
    centricity="server-centric",
    directness="direct",
    symmetric=False,
    extensible=True,
    deployment="non-modular",
    blocking="blocking",
    tiers="flat",
)

HCN_TAXONOMY = TaxonomyRecord(
    build_approach="deterministic",
    centricity="server-centric",
    directness="direct",
    symmetric=True,
    extensible=True,
    deployment="non-modular",
    blocking="blocking",
    tiers="n-tier",
)


# ---------------------------------------------------------------------------
# Fat-tree family


def _fat_tree_nodes(k: int, hosts_per_edge: int, builder: str) -> list[Node]:
    half = k // 2
    num_hosts = k * half * hosts_per_edge
    switch_radix = max(k, hosts_per_edge + half)
    nodes = []
    for p in range(k):
        for e in range(half):
            for h in range(hosts_per_edge):
                nid = (p * half + e) * hosts_per_edge + h
                nodes.append(
                    Node(
                        nid,
                        NodeKind.HOST,
                        1,
                        Address((0, p, e, h), AddressScheme.FAT_TREE_POD),
                        label=f"h-p{p}e{e}n{h}",
                    )
                )
    base = num_hosts
    for p in range(k):
        for e in range(half):
            nodes.append(
                Node(
                    base + p * half + e,
                    NodeKind.SWITCH,
                    switch_radix,
                    Address((1, p, e, 0), AddressScheme.FAT_TREE_POD),
                    label=f"edge-p{p}e{e}",
                )
            )
    base += k * half
    for p in range(k):
        for a in range(half):
            nodes.append(
                Node(
                    base + p * half + a,
                    NodeKind.SWITCH,
                    switch_radix,
                    Address((2, p, a, 0), AddressScheme.FAT_TREE_POD),
                    label=f"agg-p{p}a{a}",
                )
            )
    base += k * half
    for c in range(half * half):
        nodes.append(
            Node(
                base + c,
                NodeKind.SWITCH,
                switch_radix,
                Address((3, k, c // half, c % half), AddressScheme.FAT_TREE_POD),
                label=f"core-{c}",
            )
        )
    return nodes


def _fat_tree_links(k: int, hosts_per_edge: int, core_stripe_of_agg) -> list[Link]:
    half = k // 2
    num_hosts = k * half * hosts_per_edge
    edge_base = num_hosts
    agg_base = edge_base + k * half
    core_base = agg_base + k * half
    links = []
    for p in range(k):
        for e in range(half):
            edge = edge_base + p * half + e
            for h in range(hosts_per_edge):
                host = (p * half + e) * hosts_per_edge + h
                links.append(Link(host, edge))
            for a in range(half):
                links.append(Link(edge, agg_base + p * half + a))
        for a in range(half):
            agg = agg_base + p * half + a
            for core in core_stripe_of_agg(p, a):
                links.append(Link(agg, core_base + core))
    return links


def build_fat_tree(k: int, hosts_per_edge: Optional[int] = None) -> Topology:
    """k-ary fat tree: k pods of k/2 edge + k/2 aggregation switches,
    (k/2)^2 core switches, and k/2 hosts per edge switch (k^3/4 total).

    ``hosts_per_edge`` overrides the per-edge host count (e.g. 1 replicates
    the survey's 8-host evaluation setup) without touching the switch fabric.
    """
    if k < 2 or k % 2 != 0:
        raise TopologyError(f"fat tree requires even k >= 2, got {k}")
    half = k // 2
    if hosts_per_edge is None:
        hosts_per_edge = half
    if hosts_per_edge < 1:
        raise TopologyError("hosts_per_edge must be >= 1")
    num_hosts = k * half * hosts_per_edge
    _check_cap(num_hosts + k * k + half * half, f"fat_tree(k={k})")

    def stripe(p: int, a: int) -> range:
        return range(a * half, (a + 1) * half)

    nodes = _fat_tree_nodes(k, hosts_per_edge, "fat_tree")
    links = _fat_tree_links(k, hosts_per_edge, stripe)
    return Topology(
        nodes,
        links,
        taxonomy=FAT_TREE_TAXONOMY,
        builder_params={"builder": "fat_tree", "k": k, "hosts_per_edge": hosts_per_edge},
    )


def build_f10(k: int, hosts_per_edge: Optional[int] = None) -> Topology:
    """AB fat tree: identical node counts to the fat tree, but pods alternate
    between two aggregation-to-core wirings (type A: block striping, type B:
    strided striping) so a core can reach a pod through a second aggregation
    switch in two extra hops when one fails.
    """
    if k < 4 or k % 2 != 0:
        raise TopologyError(f"F10 requires even k >= 4, got {k}")
    half = k // 2
    if hosts_per_edge is None:
        hosts_per_edge = half

    def stripe(p: int, a: int):
        if p % 2 == 0:  # type A
            return range(a * half, (a + 1) * half)
        return range(a, half * half, half)  # type B

    nodes = _fat_tree_nodes(k, hosts_per_edge, "f10")
    links = _fat_tree_links(k, hosts_per_edge, stripe)
    return Topology(
        nodes,
        links,
        taxonomy=FAT_TREE_TAXONOMY,
        builder_params={"builder": "f10", "k": k, "hosts_per_edge": hosts_per_edge},
    )


def build_facebook_fabric(
    edge_switches: int = 48,
    agg_switches: int = 4,
    hosts_per_edge: int = 1,
    planes: int = 1,
    host_link_capacity: float = 1.0,
    fabric_link_capacity: float = 4.0,
) -> Topology:
    """Scaled Facebook fabric: every edge switch links to every aggregation
    switch in each plane. Fabric links default to 4x the host link capacity,
    modeling 40G uplinks over 10G host downlinks.
    """
    if edge_switches < 1 or agg_switches < 1 or planes < 1 or hosts_per_edge < 0:
        raise TopologyError("facebook fabric requires positive switch/plane counts")
    num_hosts = edge_switches * hosts_per_edge
    num_switches = edge_switches + planes * agg_switches
    _check_cap(num_hosts + num_switches, "facebook_fabric")
    nodes = []
    for e in range(edge_switches):
        for h in range(hosts_per_edge):
            nid = e * hosts_per_edge + h
            nodes.append(
                Node(nid, NodeKind.HOST, 1,
                     Address((0, 0, e, h), AddressScheme.FAT_TREE_POD),
                     label=f"h-e{e}n{h}")
            )
    edge_base = num_hosts
    edge_radix = hosts_per_edge + planes * agg_switches
    for e in range(edge_switches):
        nodes.append(
            Node(edge_base + e, NodeKind.SWITCH, edge_radix,
                 Address((1, 0, e, 0), AddressScheme.FAT_TREE_POD),
                 label=f"edge-{e}")
        )
    agg_base = edge_base + edge_switches
    for pl in range(planes):
        for a in range(agg_switches):
            nodes.append(
                Node(agg_base + pl * agg_switches + a, NodeKind.SWITCH, edge_switches,
                     Address((2, pl, a, 0), AddressScheme.FAT_TREE_POD),
                     label=f"agg-pl{pl}a{a}")
            )
    links = []
    for e in range(edge_switches):
        edge = edge_base + e
        for h in range(hosts_per_edge):
            links.append(Link(e * hosts_per_edge + h, edge, host_link_capacity))
        for pl in range(planes):
            for a in range(agg_switches):
                links.append(
                    Link(edge, agg_base + pl * agg_switches + a, fabric_link_capacity)
                )
    return Topology(
        nodes,
        links,
        taxonomy=FAT_TREE_TAXONOMY,
        builder_params={
            "builder": "facebook_fabric",
            "edge_switches": edge_switches,
            "agg_switches": agg_switches,
            "hosts_per_edge": hosts_per_edge,
            "planes": planes,
            "host_link_capacity": host_link_capacity,
            "fabric_link_capacity": fabric_link_capacity,
        },
    )


# ---------------------------------------------------------------------------
# DCell


def dcell_host_count(n: int, level: int) -> int:
    """Host count t_level of DCell(n, level): t_0 = n, t_l = t_{l-1}*(t_{l-1}+1)."""
    if n < 2 or level < 0:
        raise TopologyError(f"dcell requires n >= 2 and level >= 0, got n={n}, level={level}")
    t = n
    for _ in range(level):
        t = t * (t + 1)
    return t


def _dcell_t_list(n: int, level: int) -> list[int]:
    ts = [n]
    for _ in range(level):
        ts.append(ts[-1] * (ts[-1] + 1))
    return ts


def build_dcell(n: int, level: int) -> Topology:
    """Recursive DCell: DCell_0 is n hosts on one switch; DCell_l is
    (t_{l-1}+1) copies of DCell_{l-1} pairwise joined by one host-to-host
    link each (sub-cell i's (j-1)-th host to sub-cell j's i-th host).
    """
    ts = _dcell_t_list(n, level)
    num_hosts = ts[-1]
    num_switches = num_hosts // n
    _check_cap(num_hosts + num_switches, f"dcell(n={n}, level={level})")

    def digits_of(uid: int) -> tuple[int, ...]:
        ds = []
        rest = uid
        for m in range(level, 0, -1):
            ds.append(rest // ts[m - 1])
            rest %= ts[m - 1]
        ds.append(rest)
        return tuple(ds)

    nodes = []
    for uid in range(num_hosts):
        nodes.append(
            Node(uid, NodeKind.HOST, level + 1,
                 Address(digits_of(uid), AddressScheme.DCELL_COORD),
                 label=f"h{uid}")
        )
    for c in range(num_switches):
        prefix = digits_of(c * n)[:-1]
        nodes.append(
            Node(num_hosts + c, NodeKind.SWITCH, n,
                 Address(prefix + (n,), AddressScheme.DCELL_COORD),
                 label=f"sw{c}")
        )
    links = []
    for uid in range(num_hosts):
        links.append(Link(uid, num_hosts + uid // n))
    for m in range(1, level + 1):
        sub = ts[m - 1]
        cell_size = ts[m]
        for cell in range(num_hosts // cell_size):
            base = cell * cell_size
            for i in range(sub + 1):
                for j in range(i + 1, sub + 1):
                    links.append(Link(base + i * sub + (j - 1), base + j * sub + i))
    return Topology(
        nodes,
        links,
        taxonomy=DCELL_TAXONOMY,
        builder_params={"builder": "dcell", "n": n, "level": level, "t": ts},
    )


# ---------------------------------------------------------------------------
# BCube and MDCube


def _bcube_parts(n: int, k: int):
    """Node and link lists for one BCube(n, k), ids starting at 0 hosts-first."""
    num_hosts = n ** (k + 1)
    per_level = n**k
    nodes = []
    for uid in range(num_hosts):
        digits = []
        rest = uid
        for _ in range(k + 1):
            digits.append(rest % n)
            rest //= n
        digits.reverse()  # (d_k, ..., d_0)
        nodes.append(
            Node(uid, NodeKind.HOST, k + 1,
                 Address(tuple(digits), AddressScheme.BCUBE_DIGITS),
                 label=f"h{uid}")
        )
    for i in range(k + 1):
        for m in range(per_level):
            digits = []
            rest = m
            for _ in range(k):
                digits.append(rest % n)
                rest //= n
            digits.reverse()
            nodes.append(
                Node(num_hosts + i * per_level + m, NodeKind.SWITCH, n,
                     Address((i,) + tuple(digits), AddressScheme.BCUBE_DIGITS),
                     label=f"sw-l{i}-{m}")
            )
    links = []
    for i in range(k + 1):
        stride = n**i
        for m in range(per_level):
            # expand m's digits around position i to enumerate attached hosts
            high, low = divmod(m, stride)
            base_uid = high * stride * n + low
            switch = num_hosts + i * per_level + m
            for d in range(n):
                links.append(Link(base_uid + d * stride, switch))
    return nodes, links


def build_bcube(n: int, k: int) -> Topology:
    """BCube(n, k): n^(k+1) hosts addressed by k+1 base-n digits; the level-i
    switch for each digit combination joins the n hosts differing only in
    digit i. (k+1)*n^k switches total.
    """
    if n < 2 or k < 0:
        raise TopologyError(f"bcube requires n >= 2 and k >= 0, got n={n}, k={k}")
    num_hosts = n ** (k + 1)
    _check_cap(num_hosts + (k + 1) * n**k, f"bcube(n={n}, k={k})")
    nodes, links = _bcube_parts(n, k)
    return Topology(
        nodes,
        links,
        taxonomy=BCUBE_TAXONOMY,
        builder_params={"builder": "bcube", "n": n, "k": k},
    )


def build_mdcube(rows: int, cols: int, n: int, k: int) -> Topology:
    """MDCube: a rows x cols grid of BCube(n, k) containers, with containers
    in the same row (and same column) pairwise joined by one link between
    designated switches, forming a complete graph per dimension.
    """
    if rows < 1 or cols < 1:
        raise TopologyError("mdcube requires rows, cols >= 1")
    per_hosts = n ** (k + 1)
    per_switches = (k + 1) * n**k
    containers = rows * cols
    inter_per_container = (rows - 1) + (cols - 1)
    if inter_per_container > per_switches:
        raise TopologyError(
            f"container has {per_switches} switches but needs "
            f"{inter_per_container} inter-container ports"
        )
    _check_cap(containers * (per_hosts + per_switches), "mdcube")
    bnodes, blinks = _bcube_parts(n, k)
    nodes: list[Node] = []
    host_total = containers * per_hosts
    for q in range(containers):
        hbase = q * per_hosts
        for node in bnodes[:per_hosts]:
            nodes.append(
                Node(hbase + node.id, NodeKind.HOST, node.radix + 0,
                     Address(), label=f"c{q}-{node.label}")
            )
    for q in range(containers):
        sbase = host_total + q * per_switches
        for node in bnodes[per_hosts:]:
            nodes.append(
                Node(sbase + (node.id - per_hosts), NodeKind.SWITCH, n + 1,
                     Address(), label=f"c{q}-{node.label}")
            )
    links = []
    for q in range(containers):
        hbase = q * per_hosts
        sbase = host_total + q * per_switches
        for link in blinks:
            a = hbase + link.a if link.a < per_hosts else sbase + (link.a - per_hosts)
            b = hbase + link.b if link.b < per_hosts else sbase + (link.b - per_hosts)
            links.append(Link(a, b))

    def switch_id(q: int, idx: int) -> int:
        return host_total + q * per_switches + idx

    for r in range(rows):
        for c1 in range(cols):
            for c2 in range(c1 + 1, cols):
                q1, q2 = r * cols + c1, r * cols + c2
                links.append(Link(switch_id(q1, c2 - 1), switch_id(q2, c1)))
    for c in range(cols):
        for r1 in range(rows):
            for r2 in range(r1 + 1, rows):
                q1, q2 = r1 * cols + c, r2 * cols + c
                links.append(
                    Link(switch_id(q1, (cols - 1) + r2 - 1), switch_id(q2, (cols - 1) + r1))
                )
    return Topology(
        nodes,
        links,
        taxonomy=MDCUBE_TAXONOMY,
        builder_params={
            "builder": "mdcube", "rows": rows, "cols": cols, "n": n, "k": k,
        },
    )


# ---------------------------------------------------------------------------
# Jellyfish


def _random_regular_switch_graph(
    num_switches: int, r: int, rng: random.Random, max_repairs: int
) -> list[tuple[int, int]]:
    """Random r-regular graph on switch indices via stub pairing, repaired
    with the rewiring move (remove (y,z), add two links) when pairing stalls.
    """
    free = [r] * num_switches
    adjacent: list[set[int]] = [set() for _ in range(num_switches)]
    edges: list[tuple[int, int]] = []
    repairs = 0
    while True:
        urn = [s for s in range(num_switches) for _ in range(free[s])]
        if not urn:
            return edges
        # try random pairings
        paired = False
        for _ in range(20 * len(urn) + 20):
            u = urn[rng.randrange(len(urn))]
            v = urn[rng.randrange(len(urn))]
            if u != v and v not in adjacent[u]:
                edges.append((u, v))
                adjacent[u].add(v)
                adjacent[v].add(u)
                free[u] -= 1
                free[v] -= 1
                paired = True
                break
        if paired:
            continue
        # pairing stalled: rewire an existing link through a free-port switch
        if repairs >= max_repairs:
            raise TopologyError(
                f"jellyfish pairing stalled after {repairs} repairs "
                f"(num_switches={num_switches}, r={r})"
            )
        repairs += 1
        # take two distinct stubs (same switch only if it holds both)
        i = rng.randrange(len(urn))
        j = rng.randrange(len(urn) - 1)
        if j >= i:
            j += 1
        u, v = urn[i], urn[j]
        candidates = [
            (i, y, z)
            for i, (y, z) in enumerate(edges)
            if y not in adjacent[u] and z not in adjacent[v]
            and y not in (u, v) and z not in (u, v)
        ]
        if not candidates:
            raise TopologyError("jellyfish repair found no removable link")
        i, y, z = candidates[rng.randrange(len(candidates))]
        edges.pop(i)
        adjacent[y].discard(z)
        adjacent[z].discard(y)
        for a, b in ((u, y), (v, z)):
            edges.append((a, b))
            adjacent[a].add(b)
            adjacent[b].add(a)
        # y and z swap one neighbor for another; only u and v consume stubs
        free[u] -= 1
        free[v] -= 1


def _jellyfish_topology(
    switch_edges: list[tuple[int, int]],
    num_switches: int,
    ports: int,
    r: int,
    params: dict,
) -> Topology:
    hosts_per_switch = ports - r
    num_hosts = num_switches * hosts_per_switch
    nodes = [
        Node(i, NodeKind.HOST, 1, label=f"h{i}") for i in range(num_hosts)
    ]
    nodes += [
        Node(num_hosts + s, NodeKind.SWITCH, ports, label=f"sw{s}")
        for s in range(num_switches)
    ]
    links = []
    for s in range(num_switches):
        for h in range(hosts_per_switch):
            links.append(Link(s * hosts_per_switch + h, num_hosts + s))
    for u, v in switch_edges:
        links.append(Link(num_hosts + u, num_hosts + v))
    return Topology(nodes, links, taxonomy=JELLYFISH_TAXONOMY, builder_params=params)


def build_jellyfish(num_switches: int, ports: int, r: int, seed: int = 0) -> Topology:
    """Jellyfish: a random r-regular graph over switches, with the remaining
    ports - r ports of each switch attached to hosts. Deterministic per seed.
    """
    if r >= ports:
        raise TopologyError(f"need r < ports, got r={r}, ports={ports}")
    if r < 1:
        raise TopologyError("r = 0 gives a disconnected switch cloud")
    if num_switches < r + 1:
        raise TopologyError(f"r-regular graph needs at least r+1={r + 1} switches")
    if num_switches * r % 2 != 0:
        raise TopologyError("num_switches * r must be even for an r-regular graph")
    _check_cap(num_switches * (1 + ports - r), "jellyfish")
    rng = random.Random(seed)
    for attempt in range(8):
        edges = _random_regular_switch_graph(
            num_switches, r, rng, max_repairs=10 * num_switches + 50
        )
        # regularity guarantees connectivity only probabilistically; re-roll if not
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {s: [] for s in range(num_switches)}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == num_switches:
            return _jellyfish_topology(
                edges, num_switches, ports, r,
                {"builder": "jellyfish", "num_switches": num_switches,
                 "ports": ports, "r": r, "seed": seed},
            )
    raise TopologyError("jellyfish produced a disconnected switch graph repeatedly")


def expand_jellyfish(topology: Topology, ports: int, r: int, seed: int = 0) -> Topology:
    """Add one switch to a jellyfish topology by repeatedly removing a random
    switch link (x, y) and adding (x, new) and (y, new), preserving existing
    switch degrees. With odd r the new switch ends at r - 1 switch links.
    """
    if topology.builder_params.get("builder") != "jellyfish":
        raise TopologyError("expand_jellyfish requires a jellyfish-built topology")
    if r < 2:
        raise TopologyError("expansion requires r >= 2")
    old_hosts = topology.num_hosts
    old_switches = topology.num_switches
    hosts_per_switch = ports - r
    new_hosts = old_hosts + hosts_per_switch
    rng = random.Random(seed)

    def new_id(old: int) -> int:
        return old if old < old_hosts else old + hosts_per_switch

    switch_edges = []  # in new ids
    host_links = []
    for link in topology.links:
        a_sw = link.a >= old_hosts
        b_sw = link.b >= old_hosts
        if a_sw and b_sw:
            switch_edges.append((new_id(link.a), new_id(link.b)))
        else:
            host_links.append((new_id(link.a), new_id(link.b)))
    new_switch = new_hosts + old_switches
    adjacent = set()
    for u, v in switch_edges:
        adjacent.add((u, v))
        adjacent.add((v, u))
    new_degree = 0
    new_neighbors: set[int] = set()
    while new_degree + 2 <= r:
        candidates = [
            i for i, (u, v) in enumerate(switch_edges)
            if u not in new_neighbors and v not in new_neighbors
        ]
        if not candidates:
            raise TopologyError("no removable link available for expansion")
        i = candidates[rng.randrange(len(candidates))]
        u, v = switch_edges.pop(i)
        switch_edges.append((u, new_switch))
        switch_edges.append((v, new_switch))
        new_neighbors.update((u, v))
        new_degree += 2

    nodes = [Node(i, NodeKind.HOST, 1, label=f"h{i}") for i in range(new_hosts)]
    nodes += [
        Node(new_hosts + s, NodeKind.SWITCH, ports, label=f"sw{s}")
        for s in range(old_switches + 1)
    ]
    links = [Link(a, b) for a, b in host_links]
    for h in range(hosts_per_switch):
        links.append(Link(old_hosts + h, new_switch))
    links += [Link(a, b) for a, b in switch_edges]
    params = dict(topology.builder_params)
    params["num_switches"] = old_switches + 1
    params["expanded"] = params.get("expanded", 0) + 1
    return Topology(nodes, links, taxonomy=JELLYFISH_TAXONOMY, builder_params=params)


# ---------------------------------------------------------------------------
# Scafida


def build_scafida(
    num_switches: int,
    num_hosts: int,
    max_degree: int,
    seed: int = 0,
    switch_links: int = 2,
    host_links: int = 4,
) -> Topology:
    """Scale-free-style growth: nodes arrive one at a time and attach their
    links to existing switches chosen preferentially by degree (endpoint urn),
    skipping switches already at ``max_degree``. Switches arrive first with
    ``switch_links`` attachments each, then multi-homed hosts with up to
    ``host_links`` uplinks to distinct switches. Deterministic per seed.
    """
    if max_degree < 2:
        raise TopologyError("max_degree must be >= 2")
    if num_switches < 1:
        raise TopologyError("need at least one switch")
    rng = random.Random(seed)
    host_cap = min(host_links, max_degree)
    # internal switch keys 0..S-1; host keys S..S+H-1
    degree = [0] * (num_switches + num_hosts)
    neighbor: list[set[int]] = [set() for _ in range(num_switches + num_hosts)]
    urn: list[int] = []  # one switch entry per attached link endpoint
    edges: list[tuple[int, int]] = []

    def attach(node: int, want: int, cap_self: int) -> int:
        made = 0
        for _ in range(want):
            if degree[node] >= cap_self:
                break
            target = -1
            for _ in range(4 * len(urn) + 8):
                if not urn:
                    break
                t = urn[rng.randrange(len(urn))]
                if t != node and degree[t] < max_degree and t not in neighbor[node]:
                    target = t
                    break
            if target < 0:
                eligible = [
                    s for s in range(min(node, num_switches))
                    if degree[s] < max_degree and s not in neighbor[node] and s != node
                ]
                if not eligible:
                    break
                target = eligible[rng.randrange(len(eligible))]
            edges.append((target, node))
            neighbor[node].add(target)
            neighbor[target].add(node)
            degree[node] += 1
            degree[target] += 1
            urn.append(target)
            made += 1
        return made

    for s in range(num_switches):
        if s == 0:
            continue
        made = attach(s, min(switch_links, s), max_degree)
        if made == 0:
            raise TopologyError(
                f"switch {s} could not attach: connectivity unattainable under "
                f"max_degree={max_degree}"
            )
    for h in range(num_hosts):
        node = num_switches + h
        made = attach(node, host_cap, host_cap)
        if made == 0:
            raise TopologyError(
                f"host {h} could not attach: no switch ports free under "
                f"max_degree={max_degree}"
            )
    _check_cap(num_switches + num_hosts, "scafida")
    nodes = [
        Node(i, NodeKind.HOST, host_cap, label=f"h{i}") for i in range(num_hosts)
    ]
    nodes += [
        Node(num_hosts + s, NodeKind.SWITCH, max_degree, label=f"sw{s}")
        for s in range(num_switches)
    ]

    def to_id(key: int) -> int:
        return num_hosts + key if key < num_switches else key - num_switches

    links = [Link(to_id(a), to_id(b)) for a, b in edges]
    return Topology(
        nodes,
        links,
        taxonomy=SCAFIDA_TAXONOMY,
        builder_params={
            "builder": "scafida", "num_switches": num_switches,
            "num_hosts": num_hosts, "max_degree": max_degree, "seed": seed,
            "switch_links": switch_links, "host_links": host_links,
        },
    )


# ---------------------------------------------------------------------------
# HCN and BCN


def _hcn_links(groups: list[list[int]], fanout: int, levels: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Pairwise-interconnect free host ports HCN-style over ``levels`` levels.

    ``groups`` holds the ordered free-port host lists of the level-0 modules.
    Returns the host-to-host links and the free ports left at the top level.
    """
    links = []
    modules = groups
    for _ in range(levels):
        next_modules = []
        for base in range(0, len(modules), fanout):
            chunk = modules[base : base + fanout]
            for i in range(fanout):
                for j in range(i + 1, fanout):
                    links.append((chunk[i][j - 1], chunk[j][i]))
            next_modules.append([sub[fanout - 1] for sub in chunk])
        modules = next_modules
    assert len(modules) == 1
    return links, modules[0]


def build_hcn(n: int, h: int) -> Topology:
    """HCN(n, h): n^h groups of n dual-port hosts on an n-port switch,
    recursively interconnected through the hosts' second ports; n ports
    remain free at the top for further extension.
    """
    if n < 2 or h < 0:
        raise TopologyError(f"hcn requires n >= 2 and h >= 0, got n={n}, h={h}")
    num_hosts = n ** (h + 1)
    num_groups = n**h
    _check_cap(num_hosts + num_groups, f"hcn(n={n}, h={h})")
    nodes = [Node(i, NodeKind.HOST, 2, label=f"h{i}") for i in range(num_hosts)]
    nodes += [
        Node(num_hosts + g, NodeKind.SWITCH, n, label=f"sw{g}")
        for g in range(num_groups)
    ]
    links = [Link(i, num_hosts + i // n) for i in range(num_hosts)]
    groups = [[g * n + p for p in range(n)] for g in range(num_groups)]
    host_links, free_ports = _hcn_links(groups, n, h)
    links += [Link(a, b) for a, b in host_links]
    return Topology(
        nodes,
        links,
        taxonomy=HCN_TAXONOMY,
        builder_params={"builder": "hcn", "n": n, "h": h, "free_ports": free_ports},
    )


def build_bcn(alpha: int, beta: int, h: int) -> Topology:
    """BCN(alpha, beta, h): units recurse HCN-style over the alpha master
    servers per group; the alpha^h * beta slave servers of each unit then form
    a complete graph over alpha^h * beta + 1 units in the second dimension.
    """
    if alpha < 1 or beta < 0 or h < 0:
        raise TopologyError("bcn requires alpha >= 1, beta >= 0, h >= 0")
    n = alpha + beta
    groups_per_unit = alpha**h
    hosts_per_unit = groups_per_unit * n
    slaves_per_unit = groups_per_unit * beta
    units = slaves_per_unit + 1
    num_hosts = units * hosts_per_unit
    num_switches = units * groups_per_unit
    _check_cap(num_hosts + num_switches, f"bcn(alpha={alpha}, beta={beta}, h={h})")
    nodes = [Node(i, NodeKind.HOST, 2, label=f"h{i}") for i in range(num_hosts)]
    nodes += [
        Node(num_hosts + s, NodeKind.SWITCH, n, label=f"sw{s}")
        for s in range(num_switches)
    ]
    links = []
    slave_lists = []
    for u in range(units):
        hbase = u * hosts_per_unit
        sbase = num_hosts + u * groups_per_unit
        slaves = []
        master_groups = []
        for g in range(groups_per_unit):
            gbase = hbase + g * n
            for p in range(n):
                links.append(Link(gbase + p, sbase + g))
            master_groups.append([gbase + p for p in range(alpha)])
            slaves.extend(gbase + alpha + q for q in range(beta))
        if alpha >= 2:
            master_links, _ = _hcn_links(master_groups, alpha, h)
            links += [Link(a, b) for a, b in master_links]
        slave_lists.append(slaves)
    for i in range(units):
        for j in range(i + 1, units):
            links.append(Link(slave_lists[i][j - 1], slave_lists[j][i]))
    return Topology(
        nodes,
        links,
        taxonomy=HCN_TAXONOMY,
        builder_params={
            "builder": "bcn", "alpha": alpha, "beta": beta, "h": h, "units": units,
        },
    )


# ---------------------------------------------------------------------------
# Presets

PRESETS = {
    "fat-tree-k4": lambda seed=0: build_fat_tree(4),
    "fat-tree-k4-paper": lambda seed=0: build_fat_tree(4, hosts_per_edge=1),
    "dcell-n4-l1": lambda seed=0: build_dcell(4, 1),
    "dcell-n6-l1": lambda seed=0: build_dcell(6, 1),
    "bcube-n4-k1": lambda seed=0: build_bcube(4, 1),
    "facebook-scaled": lambda seed=0: build_facebook_fabric(48, 4, 1, 1),
    "f10-k4": lambda seed=0: build_f10(4),
    "jellyfish-s10-p4-r3": lambda seed=0: build_jellyfish(10, 4, 3, seed),
}


def build_preset(name: str, seed: int = 0) -> Topology:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise TopologyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return factory(seed)
