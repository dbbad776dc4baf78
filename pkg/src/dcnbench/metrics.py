"""Structural analytics: path lengths, bisection bandwidth, over-subscription,
disjoint paths, and switch-failure experiments.

Bisection bandwidth follows the survey's definition: the minimum, over
balanced host bipartitions, of the capacity that must be cut to separate the
two host sets. Exact computation brute-forces all balanced partitions (guarded
by host count); the heuristic runs a randomized swap descent over partitions
and therefore always reports an upper bound on the true minimum.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .graph import Topology, TopologyError, bfs_distances

INF = float("inf")


@dataclass
class MetricsReport:
    topology: str
    hosts: int
    switches: int
    host_diameter: int
    avg_host_path: float
    bisection_bandwidth: float
    oversubscription: float
    method: str  # "exact" | "heuristic"

    def csv_row(self) -> str:
        return (
            f"{self.topology},{self.hosts},{self.switches},{self.host_diameter},"
            f"{self.avg_host_path:.6f},{self.bisection_bandwidth:.6f},"
            f"{self.oversubscription:.6f},{self.method}"
        )

    @staticmethod
    def csv_header() -> str:
        return "topology,hosts,switches,diameter,avg_path,bisection,oversub,method"


class MaxFlow:
    """Dinic's algorithm with float capacities and an optional flow cutoff."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[float] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: float, cap_rev: float = 0.0) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(cap_rev)
        return idx

    def snapshot(self) -> list[float]:
        return list(self.cap)

    def restore(self, caps: list[float]) -> None:
        self.cap[:] = caps

    def max_flow(self, s: int, t: int, limit: float = INF) -> float:
        flow = 0.0
        eps = 1e-12
        while flow < limit - eps:
            level = [-1] * self.n
            level[s] = 0
            frontier = [s]
            while frontier and level[t] < 0:
                nxt = []
                for v in frontier:
                    for idx in self.head[v]:
                        w = self.to[idx]
                        if self.cap[idx] > eps and level[w] < 0:
                            level[w] = level[v] + 1
                            nxt.append(w)
                frontier = nxt
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(v: int, pushed: float) -> float:
                if v == t:
                    return pushed
                while it[v] < len(self.head[v]):
                    idx = self.head[v][it[v]]
                    w = self.to[idx]
                    if self.cap[idx] > eps and level[w] == level[v] + 1:
                        got = dfs(w, min(pushed, self.cap[idx]))
                        if got > eps:
                            self.cap[idx] -= got
                            self.cap[idx ^ 1] += got
                            return got
                    it[v] += 1
                return 0.0

            while flow < limit - eps:
                pushed = dfs(s, limit - flow)
                if pushed <= eps:
                    break
                flow += pushed
        return flow


# ---------------------------------------------------------------------------
# Path metrics


def host_diameter(topology: Topology) -> int:
    """Max over host pairs of the shortest path length in links."""
    hosts = topology.hosts
    if len(hosts) < 2:
        raise TopologyError("host_diameter needs at least two hosts")
    worst = 0
    for h in hosts:
        dist = bfs_distances(topology, h)
        for other in hosts:
            if dist[other] < 0:
                raise TopologyError("topology is disconnected")
            if other != h and dist[other] > worst:
                worst = dist[other]
    return worst


def avg_host_path(topology: Topology) -> float:
    """Mean shortest-path length over unordered host pairs."""
    hosts = topology.hosts
    if len(hosts) < 2:
        raise TopologyError("avg_host_path needs at least two hosts")
    total = 0
    count = 0
    index = {h: i for i, h in enumerate(hosts)}
    for h in hosts:
        dist = bfs_distances(topology, h)
        for other in hosts:
            if index[other] <= index[h]:
                continue
            if dist[other] < 0:
                raise TopologyError("topology is disconnected")
            total += dist[other]
            count += 1
    return total / count


# ---------------------------------------------------------------------------
# Bisection bandwidth


def _partition_cut_solver(topology: Topology):
    """Max-flow network with a toggleable supersource/supersink per host."""
    n = topology.num_nodes
    solver = MaxFlow(n + 2)
    s, t = n, n + 1
    for link in topology.links:
        solver.add_edge(link.a, link.b, link.capacity, link.capacity)
    host_arcs = {}
    for h in topology.hosts:
        host_arcs[h] = (solver.add_edge(s, h, 0.0), solver.add_edge(h, t, 0.0))
    base = solver.snapshot()

    def cut_value(side_a, limit: float = INF) -> float:
        solver.restore(base)
        side_a = set(side_a)
        for h, (sa, ht) in host_arcs.items():
            if h in side_a:
                solver.cap[sa] = INF
            else:
                solver.cap[ht] = INF
        return solver.max_flow(s, t, limit)

    return cut_value


def bisection_bandwidth_exact(topology: Topology, max_hosts: int = 16) -> float:
    """Minimum cut capacity over all balanced host bipartitions, by brute
    force over partitions with a max-flow evaluation each. Guarded by
    ``max_hosts`` since the partition count is combinatorial.
    """
    hosts = topology.hosts
    H = len(hosts)
    if H < 2:
        raise TopologyError("bisection needs at least two hosts")
    if H > max_hosts:
        raise TopologyError(
            f"{H} hosts exceeds the exact guard of {max_hosts}; "
            "use bisection_bandwidth_heuristic"
        )
    cut_value = _partition_cut_solver(topology)
    side = H // 2
    best = INF
    rest = hosts[1:]
    if H % 2 == 0:
        # fix hosts[0] on side A so each unordered partition is seen once
        combos = (set(combo) | {hosts[0]} for combo in itertools.combinations(rest, side - 1))
    else:
        combos = (set(combo) for combo in itertools.combinations(hosts, side))
    for side_a in combos:
        value = cut_value(side_a, limit=best)
        if value < best:
            best = value
    return best


def bisection_bandwidth_heuristic(
    topology: Topology, restarts: int = 8, seed: int = 0
) -> float:
    """Best balanced-partition cut found by randomized swap descent.

    Reports the minimum cut over the partitions it visits, hence always an
    upper bound on (and often equal to) the exact bisection bandwidth.
    """
    hosts = topology.hosts
    H = len(hosts)
    if H < 2:
        raise TopologyError("bisection needs at least two hosts")
    cut_value = _partition_cut_solver(topology)
    side = H // 2
    best = INF
    for restart in range(max(1, restarts)):
        rng = random.Random(seed * 100_003 + restart)
        side_a = set(rng.sample(hosts, side))
        current = cut_value(side_a)
        improved = True
        while improved:
            improved = False
            outside = [h for h in hosts if h not in side_a]
            for a in sorted(side_a):
                for b in outside:
                    trial = (side_a - {a}) | {b}
                    value = cut_value(trial, limit=current)
                    if value < current - 1e-12:
                        side_a, current = trial, value
                        improved = True
                        break
                if improved:
                    break
        if current < best:
            best = current
    return best


def oversubscription_ratio(topology: Topology, bisection: float | None = None) -> float:
    """(sum of host access-link capacities / 2) / bisection bandwidth.

    1.0 means non-blocking. When ``bisection`` is not supplied, it is computed
    exactly for <= 16 hosts and heuristically otherwise.
    """
    if bisection is None:
        if topology.num_hosts <= 16:
            bisection = bisection_bandwidth_exact(topology)
        else:
            bisection = bisection_bandwidth_heuristic(topology)
    host_set = set(topology.hosts)
    access = 0.0
    for link in topology.links:
        if link.a in host_set:
            access += link.capacity
        if link.b in host_set:
            access += link.capacity
    return (access / 2.0) / bisection


# ---------------------------------------------------------------------------
# Disjoint paths and failures


def vertex_disjoint_paths(topology: Topology, a: int, b: int) -> int:
    """Maximum number of internally vertex-disjoint a-b paths (Menger), via
    unit-capacity max-flow on the node-split graph.
    """
    if a == b:
        raise TopologyError("endpoints must differ")
    n = topology.num_nodes
    solver = MaxFlow(2 * n)
    for v in range(n):
        if v == a or v == b:
            solver.add_edge(2 * v, 2 * v + 1, INF)
        else:
            solver.add_edge(2 * v, 2 * v + 1, 1.0)
    for link in topology.links:
        solver.add_edge(2 * link.a + 1, 2 * link.b, 1.0)
        solver.add_edge(2 * link.b + 1, 2 * link.a, 1.0)
    return int(round(solver.max_flow(2 * a + 1, 2 * b)))


def _biconnected_blocks(adj: list[list[int]], alive: list[bool]) -> list[set[int]]:
    """Biconnected components (as vertex sets) of the alive-induced subgraph."""
    n = len(adj)
    disc = [0] * n
    low = [0] * n
    timer = 1
    edge_stack: list[tuple[int, int]] = []
    blocks: list[set[int]] = []
    for root in range(n):
        if disc[root] or not alive[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        work: list[tuple[int, int, int]] = [(root, -1, 0)]
        while work:
            v, parent, i = work[-1]
            advanced = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if not alive[w] or w == parent:
                    continue
                if not disc[w]:
                    edge_stack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    work[-1] = (v, parent, i)
                    work.append((w, v, 0))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    block: set[int] = set()
                    while edge_stack:
                        x, y = edge_stack.pop()
                        block.add(x)
                        block.add(y)
                        if (x, y) == (u, v):
                            break
                    blocks.append(block)
    return blocks


def pairs_with_two_disjoint_paths(topology: Topology, alive: list[bool]) -> int:
    """Count host pairs with >= 2 internally vertex-disjoint paths among alive
    nodes. A pair qualifies iff both endpoints share a biconnected component
    of at least 3 vertices.
    """
    adj = [[nb for nb, _ in entries] for entries in topology.adjacency]
    host_set = set(topology.hosts)
    count = 0
    for block in _biconnected_blocks(adj, alive):
        if len(block) < 3:
            continue
        in_block = sum(1 for v in block if v in host_set and alive[v])
        count += in_block * (in_block - 1) // 2
    return count


def _connected_host_pairs(topology: Topology, alive: list[bool]) -> int:
    host_set = set(topology.hosts)
    seen = [False] * topology.num_nodes
    total = 0
    for start in range(topology.num_nodes):
        if seen[start] or not alive[start]:
            continue
        stack = [start]
        seen[start] = True
        hosts_here = 0
        while stack:
            v = stack.pop()
            if v in host_set:
                hosts_here += 1
            for nb, _ in topology.adjacency[v]:
                if alive[nb] and not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        total += hosts_here * (hosts_here - 1) // 2
    return total


@dataclass
class SurvivalStats:
    fail_fraction: float
    trials: int
    switches_failed: int
    mean_two_path_fraction: float
    mean_connected_fraction: float


def failure_experiment(
    topology: Topology, fail_fraction: float, trials: int, seed: int = 0
) -> SurvivalStats:
    """Remove floor(fail_fraction * S) uniformly random switches per trial and
    measure what fraction of host pairs keep >= 2 vertex-disjoint paths and
    what fraction stay connected. Hosts never fail.
    """
    if not 0 <= fail_fraction < 1:
        raise TopologyError("fail_fraction must be in [0, 1)")
    switches = topology.switches
    num_fail = math.floor(fail_fraction * len(switches))
    hosts = topology.hosts
    all_pairs = len(hosts) * (len(hosts) - 1) // 2
    two_path_sum = 0.0
    connected_sum = 0.0
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        failed = set(rng.sample(switches, num_fail))
        alive = [v not in failed for v in range(topology.num_nodes)]
        two_path_sum += pairs_with_two_disjoint_paths(topology, alive) / all_pairs
        connected_sum += _connected_host_pairs(topology, alive) / all_pairs
    return SurvivalStats(
        fail_fraction=fail_fraction,
        trials=trials,
        switches_failed=num_fail,
        mean_two_path_fraction=two_path_sum / trials,
        mean_connected_fraction=connected_sum / trials,
    )


def compute_metrics(topology: Topology, restarts: int = 8, seed: int = 0) -> MetricsReport:
    """Full report; bisection is exact up to 16 hosts, heuristic beyond."""
    if topology.num_hosts <= 16:
        bisection = bisection_bandwidth_exact(topology)
        method = "exact"
    else:
        bisection = bisection_bandwidth_heuristic(topology, restarts=restarts, seed=seed)
        method = "heuristic"
    return MetricsReport(
        topology=topology.name(),
        hosts=topology.num_hosts,
        switches=topology.num_switches,
        host_diameter=host_diameter(topology),
        avg_host_path=avg_host_path(topology),
        bisection_bandwidth=bisection,
        oversubscription=oversubscription_ratio(topology, bisection),
        method=method,
    )
