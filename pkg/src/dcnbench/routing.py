"""Route computation: generic ECMP shortest-path tables plus the specialized
per-topology algorithms (fat-tree up/down, DCell divide-and-conquer, BCube
digit correction, F10 failure detours).

Hop counts everywhere are link counts. Routes are explicit node-id sequences
from source host to destination host.
"""

from __future__ import annotations

import random
from typing import Callable, Optional, Sequence

from .graph import AddressScheme, NodeKind, Topology, TopologyError, bfs_distances

Route = list[int]

_M64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def check_route(topology: Topology, route: Sequence[int]) -> None:
    """Assert the route is adjacent-consecutive, loop-free, host-terminated."""
    if len(route) < 2:
        raise TopologyError(f"route too short: {route}")
    if len(set(route)) != len(route):
        raise TopologyError(f"route repeats a node: {route}")
    for end in (route[0], route[-1]):
        if topology.nodes[end].kind is not NodeKind.HOST:
            raise TopologyError(f"route endpoint {end} is not a host")
    for u, v in zip(route, route[1:]):
        if v not in topology.neighbors(u):
            raise TopologyError(f"route step {u}->{v} is not a link")


# ---------------------------------------------------------------------------
# ECMP


def compute_ecmp_tables(topology: Topology) -> list[dict[int, tuple[int, ...]]]:
    """Per-node map destination host -> sorted tuple of equal-cost next hops."""
    tables: list[dict[int, tuple[int, ...]]] = [dict() for _ in range(topology.num_nodes)]
    for dst in topology.hosts:
        dist = bfs_distances(topology, dst)
        if min(dist) < 0:
            raise TopologyError("topology is disconnected")
        for v in range(topology.num_nodes):
            if v == dst:
                continue
            hops = tuple(
                sorted(nb for nb, _ in topology.adjacency[v] if dist[nb] == dist[v] - 1)
            )
            tables[v][dst] = hops
    return tables


def ecmp_select(next_hops: Sequence[int], flow_id: int, salt: int = 0) -> int:
    """Deterministic flow-hashed pick from an equal-cost next-hop set."""
    hops = sorted(next_hops)
    if not hops:
        raise TopologyError("empty next-hop set")
    h = _mix64(((flow_id & _M64) * 0x100000001B3 + salt * 0x9E3779B1 + 1) & _M64)
    return hops[h % len(hops)]


def ecmp_walk_random(
    tables: list[dict[int, tuple[int, ...]]],
    src: int,
    dst: int,
    rng: random.Random,
) -> Route:
    """Shortest path sampled by picking uniformly among next hops per node."""
    route = [src]
    cur = src
    while cur != dst:
        hops = tables[cur][dst]
        cur = hops[rng.randrange(len(hops))] if len(hops) > 1 else hops[0]
        route.append(cur)
    return route


def ecmp_walk_hashed(
    tables: list[dict[int, tuple[int, ...]]],
    src: int,
    dst: int,
    flow_id: int,
    salt: int = 0,
) -> Route:
    """Shortest path selected by per-node flow hashing (frozen per flow)."""
    route = [src]
    cur = src
    while cur != dst:
        cur = ecmp_select(tables[cur][dst], flow_id, salt=salt * 0x51ED27 + cur)
        route.append(cur)
    return route


# ---------------------------------------------------------------------------
# Fat-tree family


def _fat_layer(topology: Topology, node_id: int) -> int:
    addr = topology.nodes[node_id].address
    if addr.scheme is not AddressScheme.FAT_TREE_POD:
        raise TopologyError("fat_tree_route requires a fat-tree-family topology")
    return addr.digits[0]


def fat_tree_route(
    topology: Topology, src: int, dst: int, rng: Optional[random.Random] = None
) -> Route:
    """Ascend the tree choosing uniformly among valid uplinks, stop at the
    lowest common level, then descend along the single possible path.
    """
    if src == dst:
        raise TopologyError("src and dst must differ")
    rng = rng or random.Random(0)
    nodes = topology.nodes
    for h in (src, dst):
        if nodes[h].kind is not NodeKind.HOST:
            raise TopologyError(f"{h} is not a host")
    edge_src = topology.neighbors(src)[0]
    edge_dst = topology.neighbors(dst)[0]
    if edge_src == edge_dst:
        return [src, edge_src, dst]
    up_src = [nb for nb in topology.neighbors(edge_src) if _fat_layer(topology, nb) == 2]
    common = sorted(
        set(up_src)
        & {nb for nb in topology.neighbors(edge_dst) if _fat_layer(topology, nb) == 2}
    )
    if common:
        agg = common[rng.randrange(len(common))]
        return [src, edge_src, agg, edge_dst, dst]
    agg = sorted(up_src)[rng.randrange(len(up_src))]
    cores = sorted(nb for nb in topology.neighbors(agg) if _fat_layer(topology, nb) == 3)
    core = cores[rng.randrange(len(cores))]
    dst_pod = nodes[dst].address.digits[1]
    down_aggs = [
        nb
        for nb in topology.neighbors(core)
        if _fat_layer(topology, nb) == 2 and nodes[nb].address.digits[1] == dst_pod
    ]
    if len(down_aggs) != 1:
        raise TopologyError("core switch has no unique link into the destination pod")
    agg_down = down_aggs[0]
    if edge_dst not in topology.neighbors(agg_down):
        raise TopologyError("descending path broken: aggregation not linked to edge")
    return [src, edge_src, agg, core, agg_down, edge_dst, dst]


# ---------------------------------------------------------------------------
# DCell


def dcell_route(topology: Topology, src: int, dst: int) -> Route:
    """Divide-and-conquer DCell routing: descend to the level where src and
    dst diverge, cross the single inter-sub-cell link there, and recurse on
    both halves. Intra-cell segments go through the cell switch.
    """
    params = topology.builder_params
    if params.get("builder") != "dcell":
        raise TopologyError("dcell_route requires a dcell topology")
    if src == dst:
        raise TopologyError("src and dst must differ")
    n = params["n"]
    ts = params["t"]
    num_hosts = topology.num_hosts

    def switch_of(uid: int) -> int:
        return num_hosts + uid // n

    def rec(u: int, v: int, level: int, base: int) -> Route:
        if u == v:
            return [u]
        if level == 0:
            return [u, switch_of(u), v]
        sub = ts[level - 1]
        i = (u - base) // sub
        j = (v - base) // sub
        if i == j:
            return rec(u, v, level - 1, base + i * sub)
        if i < j:
            gw_u = base + i * sub + (j - 1)
            gw_v = base + j * sub + i
        else:
            gw_u = base + i * sub + j
            gw_v = base + j * sub + (i - 1)
        left = rec(u, gw_u, level - 1, base + i * sub)
        right = rec(gw_v, v, level - 1, base + j * sub)
        return left + right

    return rec(src, dst, params["level"], 0)


# ---------------------------------------------------------------------------
# BCube


def bcube_route(topology: Topology, src: int, dst: int) -> Route:
    """Correct one differing address digit per step through the level-i
    switch; total links are exactly twice the address hamming distance.
    """
    params = topology.builder_params
    if params.get("builder") != "bcube":
        raise TopologyError("bcube_route requires a bcube topology")
    if src == dst:
        raise TopologyError("src and dst must differ")
    n, k = params["n"], params["k"]
    num_hosts = topology.num_hosts
    per_level = n**k

    def digit(uid: int, i: int) -> int:
        return (uid // n**i) % n

    def switch_of(uid: int, i: int) -> int:
        stride = n**i
        high, low = divmod(uid, stride * n)
        return num_hosts + i * per_level + high * stride + low % stride

    route = [src]
    cur = src
    for i in range(k, -1, -1):
        want = digit(dst, i)
        have = digit(cur, i)
        if have == want:
            continue
        nxt = cur + (want - have) * n**i
        route.append(switch_of(cur, i))
        route.append(nxt)
        cur = nxt
    return route


# ---------------------------------------------------------------------------
# Failure detours (F10 and fat tree)


def shortest_route_avoiding(
    topology: Topology,
    src: int,
    dst: int,
    forbidden: set[int],
    rng: Optional[random.Random] = None,
) -> Optional[Route]:
    """BFS shortest path from src to dst that avoids ``forbidden`` nodes,
    with uniform random tie-breaks when an rng is given.
    """
    if src in forbidden or dst in forbidden:
        return None
    dist = [-1] * topology.num_nodes
    dist[dst] = 0
    frontier = [dst]
    while frontier:
        nxt = []
        for v in frontier:
            for nb, _ in topology.adjacency[v]:
                if nb in forbidden or dist[nb] >= 0:
                    continue
                dist[nb] = dist[v] + 1
                nxt.append(nb)
        frontier = nxt
    if dist[src] < 0:
        return None
    route = [src]
    cur = src
    while cur != dst:
        options = sorted(
            nb for nb, _ in topology.adjacency[cur]
            if nb not in forbidden and dist[nb] == dist[cur] - 1
        )
        cur = options[rng.randrange(len(options))] if rng and len(options) > 1 else options[0]
        route.append(cur)
    return route


def _strip_loops(route: Route) -> Route:
    out: list[int] = []
    seen: dict[int, int] = {}
    for v in route:
        if v in seen:
            del out[seen[v] + 1 :]
            for w in list(seen):
                if seen[w] > seen[v]:
                    del seen[w]
        else:
            seen[v] = len(out)
            out.append(v)
    return out


def f10_reroute(
    topology: Topology,
    src: int,
    dst: int,
    failed: int,
    rng: Optional[random.Random] = None,
) -> Route:
    """Route from src to dst when ``failed`` lies on the chosen path: follow a
    shortest path toward the failure, then detour from the node immediately
    before it. Models a parent locally steering around a failed child, which
    is where the F10 wiring pays off over the standard fat tree.
    """
    rng = rng or random.Random(0)
    if topology.nodes[failed].kind is not NodeKind.SWITCH:
        raise TopologyError("failed node must be a switch")
    prefix = shortest_route_avoiding(topology, src, failed, set(), rng)
    if prefix is None or len(prefix) < 2:
        raise TopologyError("failed switch unreachable from src")
    detour_point = prefix[-2]
    detour = shortest_route_avoiding(topology, detour_point, dst, {failed}, rng)
    if detour is None:
        raise TopologyError("no route avoiding failure")
    route = _strip_loops(prefix[:-1] + detour[1:])
    if topology.nodes[route[0]].kind is not NodeKind.HOST:
        raise TopologyError("reroute does not start at a host")
    return route


# ---------------------------------------------------------------------------
# Mode dispatch

SPECIALIZED_MODES = {
    "fat_tree": "fat-tree",
    "f10": "fat-tree",
    "facebook_fabric": "fat-tree",
    "dcell": "dcell",
    "bcube": "bcube",
}


def resolve_routing_mode(topology: Topology, mode: str = "auto") -> str:
    if mode == "auto":
        return SPECIALIZED_MODES.get(topology.builder_params.get("builder"), "ecmp")
    return mode


def route_provider(
    topology: Topology, mode: str = "auto"
) -> Callable[[int, int, random.Random], Route]:
    """Return a ``(src, dst, rng) -> Route`` function for the given mode.

    Modes: "auto" (specialized when the builder has one, else ECMP),
    "ecmp", "fat-tree", "dcell", "bcube".
    """
    mode = resolve_routing_mode(topology, mode)
    if mode == "fat-tree":
        return lambda src, dst, rng: fat_tree_route(topology, src, dst, rng)
    if mode == "dcell":
        return lambda src, dst, rng: dcell_route(topology, src, dst)
    if mode == "bcube":
        return lambda src, dst, rng: bcube_route(topology, src, dst)
    if mode == "ecmp":
        tables = compute_ecmp_tables(topology)
        return lambda src, dst, rng: ecmp_walk_random(tables, src, dst, rng)
    raise TopologyError(f"unknown routing mode {mode!r}")
