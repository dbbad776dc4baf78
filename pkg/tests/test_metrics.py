import itertools

import pytest

from dcnbench.graph import Link, Node, NodeKind, Topology, TopologyError
from dcnbench.builders import (
    build_dcell,
    build_fat_tree,
    build_jellyfish,
    build_scafida,
)
from dcnbench.metrics import (
    MetricsReport,
    avg_host_path,
    bisection_bandwidth_exact,
    bisection_bandwidth_heuristic,
    compute_metrics,
    failure_experiment,
    host_diameter,
    oversubscription_ratio,
    pairs_with_two_disjoint_paths,
    vertex_disjoint_paths,
)


def star(num_hosts):
    nodes = [Node(i, NodeKind.HOST, 1) for i in range(num_hosts)]
    nodes.append(Node(num_hosts, NodeKind.SWITCH, num_hosts))
    return Topology(nodes, [Link(i, num_hosts) for i in range(num_hosts)])


def dumbbell(hosts_per_side):
    """Two switches joined by one unit link, hosts_per_side hosts each."""
    total = 2 * hosts_per_side
    nodes = [Node(i, NodeKind.HOST, 1) for i in range(total)]
    nodes += [Node(total, NodeKind.SWITCH, 16), Node(total + 1, NodeKind.SWITCH, 16)]
    links = [Link(i, total) for i in range(hosts_per_side)]
    links += [Link(hosts_per_side + i, total + 1) for i in range(hosts_per_side)]
    links.append(Link(total, total + 1))
    return Topology(nodes, links)


# --- path metrics ---------------------------------------------------------


def test_star_diameter():
    assert host_diameter(star(2)) == 2


def test_fat_tree_diameter_bfs():
    assert host_diameter(build_fat_tree(4)) == 6
    assert host_diameter(build_fat_tree(2)) == 6


def test_dcell_diameter_bound():
    assert host_diameter(build_dcell(4, 1)) <= 5


def test_star_avg_path():
    assert avg_host_path(star(5)) == 2.0
    assert avg_host_path(star(2)) == 2.0


def test_jellyfish_beats_fat_tree_avg_path():
    # matched host counts: 16 jellyfish hosts vs fat tree's 16
    jelly = build_jellyfish(16, 4, 3, seed=1)
    assert jelly.num_hosts == 16
    assert avg_host_path(jelly) < avg_host_path(build_fat_tree(4))


def test_diameter_errors():
    nodes = [Node(0, NodeKind.HOST, 1), Node(1, NodeKind.HOST, 1)]
    disconnected = Topology(nodes, [])
    with pytest.raises(TopologyError):
        host_diameter(disconnected)


# --- bisection ------------------------------------------------------------


def test_bisection_two_hosts():
    assert bisection_bandwidth_exact(star(2)) == pytest.approx(1.0)


def test_bisection_dumbbell():
    assert bisection_bandwidth_exact(dumbbell(2)) == pytest.approx(1.0)


def test_bisection_fat_tree_exact():
    assert bisection_bandwidth_exact(build_fat_tree(4)) == pytest.approx(8.0)


def test_bisection_guard():
    with pytest.raises(TopologyError):
        bisection_bandwidth_exact(build_dcell(4, 1))  # 20 hosts


def test_heuristic_recovers_dumbbell():
    assert bisection_bandwidth_heuristic(dumbbell(3), restarts=4, seed=0) == pytest.approx(1.0)


def test_heuristic_matches_exact_fat_tree():
    assert bisection_bandwidth_heuristic(build_fat_tree(4), restarts=8, seed=0) == pytest.approx(8.0)


@pytest.mark.parametrize("seed", range(4))
def test_heuristic_upper_bounds_exact(seed):
    topo = build_jellyfish(8, 4, 3, seed=seed)  # 8 hosts
    exact = bisection_bandwidth_exact(topo)
    heuristic = bisection_bandwidth_heuristic(topo, restarts=8, seed=seed)
    assert heuristic >= exact - 1e-9


# --- over-subscription ----------------------------------------------------


def test_oversubscription_fat_tree_nonblocking():
    for k in (2, 4):
        assert oversubscription_ratio(build_fat_tree(k)) == pytest.approx(1.0, abs=1e-9)


def test_oversubscription_star():
    assert oversubscription_ratio(star(2)) == pytest.approx(1.0)


def test_oversubscription_dumbbell():
    # 4 unit host links / 2 = 2 over a bisection of 1
    assert oversubscription_ratio(dumbbell(2)) == pytest.approx(2.0)


# --- disjoint paths -------------------------------------------------------


def test_vdp_shared_switch():
    assert vertex_disjoint_paths(star(2), 0, 1) == 1


def test_vdp_two_switch_disjoint_paths():
    nodes = [Node(0, NodeKind.HOST, 2), Node(1, NodeKind.HOST, 2),
             Node(2, NodeKind.SWITCH, 2), Node(3, NodeKind.SWITCH, 2)]
    links = [Link(0, 2), Link(0, 3), Link(1, 2), Link(1, 3)]
    topo = Topology(nodes, links)
    assert vertex_disjoint_paths(topo, 0, 1) == 2


def test_vdp_fat_tree_edge_switches():
    topo = build_fat_tree(4)
    # hosts have a single access link, so host-level vdp is 1
    assert vertex_disjoint_paths(topo, 0, 15) == 1
    # between edge switches of different pods the two uplinks limit vdp to 2
    edges = [n.id for n in topo.nodes
             if n.kind is NodeKind.SWITCH and n.address.digits[0] == 1]
    assert vertex_disjoint_paths(topo, edges[0], edges[-1]) == 2


def test_vdp_symmetry_and_degree_bound():
    topo = build_scafida(10, 10, 16, seed=3)
    hosts = topo.hosts
    for a, b in itertools.islice(itertools.combinations(hosts, 2), 20):
        ab = vertex_disjoint_paths(topo, a, b)
        assert ab == vertex_disjoint_paths(topo, b, a)
        assert ab <= min(topo.degree(a), topo.degree(b))


def test_block_predicate_matches_maxflow():
    topo = build_scafida(8, 8, 12, seed=9)
    alive = [True] * topo.num_nodes
    blocks_count = pairs_with_two_disjoint_paths(topo, alive)
    flow_count = sum(
        1
        for a, b in itertools.combinations(topo.hosts, 2)
        if vertex_disjoint_paths(topo, a, b) >= 2
    )
    assert blocks_count == flow_count


# --- failure experiment ----------------------------------------------------


def test_failure_zero_fraction_is_baseline():
    topo = build_scafida(12, 12, 12, seed=4)
    alive = [True] * topo.num_nodes
    pairs = topo.num_hosts * (topo.num_hosts - 1) // 2
    baseline = pairs_with_two_disjoint_paths(topo, alive) / pairs
    stats = failure_experiment(topo, 0.0, trials=3, seed=1)
    assert stats.mean_two_path_fraction == pytest.approx(baseline)
    assert stats.mean_connected_fraction == pytest.approx(1.0)


def test_failure_killing_only_switch_disconnects_all():
    topo = star(3)
    alive = [True, True, True, False]
    assert pairs_with_two_disjoint_paths(topo, alive) == 0
    from dcnbench.metrics import _connected_host_pairs
    assert _connected_host_pairs(topo, alive) == 0


def test_failure_experiment_deterministic():
    topo = build_scafida(15, 20, 10, seed=5)
    a = failure_experiment(topo, 0.2, trials=5, seed=7)
    b = failure_experiment(topo, 0.2, trials=5, seed=7)
    assert a == b


# --- report ----------------------------------------------------------------


def test_metrics_report_csv():
    report = compute_metrics(build_fat_tree(2))
    row = report.csv_row()
    assert row.startswith("fat_tree,2,5,6,")
    assert row.endswith(",exact")
    assert MetricsReport.csv_header().count(",") == row.count(",")


def test_metrics_report_heuristic_flag():
    report = compute_metrics(build_dcell(4, 1), restarts=4)
    assert report.method == "heuristic"
    assert report.bisection_bandwidth > 0
