"""Cycle-level flit simulator for off-chip topologies.

Models the survey's gem5/garnet methodology at desk scale: pipelined routers
(5-cycle default), 10-cycle links, many virtual channels per input port,
single-flit packets, Bernoulli injection, and drop-and-retransmit when a
packet's next-hop buffer pool is full. Hosts are routers too, so
server-centric topologies forward through hosts with the same pipeline.

Switch allocation is separable and round-robin like garnet's: each input port
puts forward at most one VC head per cycle, each output port grants at most
one flit per cycle, and a flit departs only when the downstream input port
has buffer space (ejection at the destination is never blocked). With
drop-and-retransmit enabled, a head whose next-hop pool is full is dropped
and re-enters its source queue after a link-latency backoff.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .graph import Topology, TopologyError
from .routing import route_provider
from .traffic import PatternKind, TrafficPattern, pattern_destination

_SCAN_LIMIT = 8  # VC heads considered per input port per cycle


@dataclass(frozen=True)
class SimConfig:
    injection_rate: float
    sim_cycles: int = 10_000
    warmup_cycles: Optional[int] = None  # default: 10% of sim_cycles
    vcs_per_port: int = 100
    router_pipeline: int = 5
    link_latency: int = 10
    vc_depth: Optional[int] = 4  # None = unbounded buffers
    flits_per_packet: int = 1
    drop_and_retransmit: bool = True
    pattern: TrafficPattern = field(default_factory=TrafficPattern.uniform)
    seed: int = 0

    def resolved_warmup(self) -> int:
        if self.warmup_cycles is not None:
            return self.warmup_cycles
        return self.sim_cycles // 10

    def check(self) -> None:
        if not 0 < self.injection_rate <= 1:
            raise TopologyError("injection_rate must be in (0, 1]")
        if self.sim_cycles <= 0 or self.resolved_warmup() >= self.sim_cycles:
            raise TopologyError("need warmup_cycles < sim_cycles")
        if self.vcs_per_port < 1 or self.router_pipeline < 0 or self.link_latency < 1:
            raise TopologyError("bad pipeline/link/vc parameters")
        if self.flits_per_packet < 1:
            raise TopologyError("flits_per_packet must be >= 1")
        if self.vc_depth is not None and self.vc_depth < 1:
            raise TopologyError("vc_depth must be >= 1 or None")


@dataclass
class SimStats:
    topology: str
    pattern: str
    routing_mode: str
    injection_rate: float
    sim_cycles: int
    warmup_cycles: int
    active_hosts: int
    packets_generated: int
    packets_injected: int
    packets_received: int
    dropped: int
    retransmitted: int
    in_flight: int
    awaiting_retransmit: int
    source_queued: int
    reception_rate: float
    avg_packet_latency: float
    per_link_utilization: dict[int, float]
    saturated: bool

    def csv_row(self, vcs: int) -> str:
        return (
            f"{self.topology},{self.pattern},{self.injection_rate:.4f},{vcs},"
            f"{self.sim_cycles},{self.packets_injected},{self.packets_received},"
            f"{self.reception_rate:.6f},{self.avg_packet_latency:.3f},"
            f"{self.dropped},{int(self.saturated)}"
        )

    @staticmethod
    def csv_header() -> str:
        return (
            "topology,pattern,rate,vcs,cycles,injected,received,"
            "reception_rate,avg_latency,dropped,saturated"
        )


class _Packet:
    __slots__ = ("src", "dst", "path", "hop", "gen_t", "base_t", "injected")

    def __init__(self, src: int, dst: int, path: list[int], gen_t: int):
        self.src = src
        self.dst = dst
        self.path = path
        self.hop = 0
        self.gen_t = gen_t  # original generation time, kept across retransmits
        self.base_t = gen_t  # arrival time at current queue (pipeline basis)
        self.injected = False


class _Port:
    """Input-port buffer pool: vcs_per_port VCs of vc_depth flits each."""

    __slots__ = ("vcs", "pool", "capacity", "depth", "ready", "open_vcs", "is_open")

    def __init__(self, vcs: int, depth: Optional[int], flit_size: int):
        self.vcs = [deque() for _ in range(vcs)]
        self.pool = 0
        self.capacity = None if depth is None else vcs * depth * flit_size
        self.depth = depth
        self.ready = deque()  # vc indices whose head is ready for allocation
        self.open_vcs = deque(range(vcs))
        self.is_open = bytearray([1]) * vcs

    def has_space(self, flit_size: int) -> bool:
        return self.capacity is None or self.pool + flit_size <= self.capacity


def _active_hosts_and_bits(
    topology: Topology, pattern: TrafficPattern
) -> tuple[list[int], int, int]:
    """Hosts that inject under the pattern, the traffic size N, and bit width.

    Bit patterns on a non-power-of-two host count run over the largest
    power-of-two host subset (lowest host indices).
    """
    hosts = topology.hosts
    H = len(hosts)
    if H < 2:
        raise TopologyError("simulation needs at least two hosts")
    kind = pattern.kind
    if kind in (PatternKind.BIT_COMPLEMENT, PatternKind.BIT_REVERSE):
        bits = H.bit_length() - 1
        n = 1 << bits
        return hosts[:n], n, bits
    if kind is PatternKind.PERMUTATION:
        active = [h for h in hosts if pattern.mapping and h in pattern.mapping]
        if not active:
            raise TopologyError("permutation pattern maps no hosts")
        return active, H, 0
    return hosts, H, 0


def run_simulation(
    topology: Topology, routing_mode: str = "auto", config: SimConfig = None
) -> SimStats:
    """Run one seeded simulation and collect post-warmup statistics.

    Deterministic for fixed (topology, routing_mode, config): identical runs
    produce identical stats.
    """
    if config is None:
        raise TopologyError("run_simulation needs a SimConfig")
    config.check()
    provider = route_provider(topology, routing_mode)
    rng = random.Random(config.seed)
    pattern = config.pattern
    active_hosts, traffic_n, bits = _active_hosts_and_bits(topology, pattern)
    warmup = config.resolved_warmup()
    sim_cycles = config.sim_cycles
    pipeline = config.router_pipeline
    link_latency = config.link_latency
    flit_size = config.flits_per_packet
    drop_mode = config.drop_and_retransmit
    rate = config.injection_rate

    num_nodes = topology.num_nodes
    num_links = len(topology.links)
    # directed channel c: 2*i = a->b, 2*i+1 = b->a for link i.
    chan_dst = [0] * (2 * num_links)
    for i, link in enumerate(topology.links):
        chan_dst[2 * i] = link.b
        chan_dst[2 * i + 1] = link.a
    out_chan: list[dict[int, int]] = [dict() for _ in range(num_nodes)]
    in_ports: list[list[int]] = [[] for _ in range(num_nodes)]  # SA-II ordering
    for v in range(num_nodes):
        in_ports[v].append(2 * num_links + v)  # injection port first
    for i, link in enumerate(topology.links):
        out_chan[link.a][link.b] = 2 * i
        out_chan[link.b][link.a] = 2 * i + 1
        in_ports[link.b].append(2 * i)
        in_ports[link.a].append(2 * i + 1)
    local_index: dict[int, int] = {}
    port_owner = [0] * (2 * num_links + num_nodes)
    for v in range(num_nodes):
        for idx, port in enumerate(in_ports[v]):
            local_index[port] = idx
            port_owner[port] = v

    ports: dict[int, _Port] = {}

    def get_port(port_id: int) -> _Port:
        port = ports.get(port_id)
        if port is None:
            if port_id >= 2 * num_links:  # injection: one unbounded queue
                port = _Port(1, None, flit_size)
            else:
                port = _Port(config.vcs_per_port, config.vc_depth, flit_size)
            ports[port_id] = port
        return port

    arrivals: dict[int, list] = {}
    ready_events: dict[int, list] = {}
    requeues: dict[int, list] = {}
    armed: dict[int, bool] = {}
    rr_out: dict[int, int] = {}
    busy_until: dict[int, int] = {}

    stats_generated = 0
    stats_injected_unique = 0
    stats_injected_window = 0
    stats_received = 0
    stats_received_window = 0
    stats_dropped = 0
    stats_retransmitted = 0
    latency_sum = 0
    departures: dict[int, int] = {}
    in_network = 0
    awaiting_backoff = 0  # dropped, waiting out the retransmission backoff

    def schedule_ready(port_id: int, vc: int, when: int) -> None:
        ready_events.setdefault(when, []).append((port_id, vc))

    def enqueue_source(pkt: _Packet, now: int) -> None:
        port_id = 2 * num_links + pkt.src
        port = get_port(port_id)
        pkt.base_t = now
        pkt.hop = 0
        q = port.vcs[0]
        q.append(pkt)
        if len(q) == 1:
            schedule_ready(port_id, 0, now + pipeline)

    def place_arrival(pkt: _Packet, port_id: int, now: int) -> None:
        port = ports[port_id]  # pool slot was reserved at departure
        while True:
            vc = port.open_vcs[0]
            q = port.vcs[vc]
            if port.depth is None or len(q) < port.depth:
                break
            port.open_vcs.popleft()
            port.is_open[vc] = 0
        pkt.base_t = now
        q.append(pkt)
        if len(q) == 1:
            schedule_ready(port_id, vc, now + pipeline)

    for t in range(sim_cycles):
        # deliver link arrivals
        for pkt, node, port_id in arrivals.pop(t, ()):
            if node == pkt.dst:
                stats_received += 1
                in_network -= 1
                if t >= warmup:
                    stats_received_window += 1
                    latency_sum += t - pkt.gen_t
            else:
                place_arrival(pkt, port_id, t)
        # retransmit backoff expiry
        for pkt in requeues.pop(t, ()):
            awaiting_retransmit -= 1
            pkt.path = provider(pkt.src, pkt.dst, rng)
            stats_retransmitted += 1
            enqueue_source(pkt, t)
        # heads become eligible for allocation
        for port_id, vc in ready_events.pop(t, ()):
            port = ports[port_id]
            port.ready.append(vc)
            armed[port_id] = True
        # injection
        for h in active_hosts:
            if rng.random() >= rate:
                continue
            dst = pattern_destination(pattern, h, traffic_n, bits=bits, rng=rng)
            if dst is None or dst == h:
                continue
            stats_generated += 1
            pkt = _Packet(h, dst, provider(h, dst, rng), t)
            enqueue_source(pkt, t)
        # switch allocation, phase A: one creditable VC head per input port
        requests: dict[int, list] = {}
        for port_id in list(armed):
            port = ports[port_id]
            ready = port.ready
            if not ready:
                del armed[port_id]
                continue
            node = port_owner[port_id]
            chosen = -1
            chosen_chan = -1
            front_pool_full = False
            scanned = []
            for _ in range(min(len(ready), _SCAN_LIMIT)):
                vc = ready.popleft()
                scanned.append(vc)
                pkt = port.vcs[vc][0]
                nxt = pkt.path[pkt.hop + 1]
                chan = out_chan[node][nxt]
                if busy_until.get(chan, 0) > t:
                    continue
                if nxt == pkt.dst or get_port(chan).has_space(flit_size):
                    chosen, chosen_chan = vc, chan
                    break
                if len(scanned) == 1:
                    front_pool_full = True
            for vc in reversed(scanned):
                ready.appendleft(vc)
            if chosen >= 0:
                requests.setdefault(chosen_chan, []).append((port_id, chosen))
            elif drop_mode and front_pool_full:
                # head-of-line packet's next hop is full: drop and retransmit
                vc = ready.popleft()
                q = port.vcs[vc]
                pkt = q.popleft()
                if port.capacity is not None:
                    port.pool -= flit_size
                    if not port.is_open[vc]:
                        port.is_open[vc] = 1
                        port.open_vcs.append(vc)
                stats_dropped += 1
                in_network -= 1
                awaiting_backoff += 1
                requeues.setdefault(t + link_latency, []).append(pkt)
                if q:
                    schedule_ready(port_id, vc, max(t + 1, q[0].base_t + pipeline))
                if not ready:
                    del armed[port_id]
        # switch allocation, phase B: one grant per output port
        for chan, cands in requests.items():
            if len(cands) == 1:
                winner = cands[0]
            else:
                upstream = port_owner[cands[0][0]]
                n_local = len(in_ports[upstream])
                pointer = rr_out.get(chan, 0)
                winner = min(
                    cands,
                    key=lambda c: (local_index[c[0]] - pointer) % n_local,
                )
                rr_out[chan] = local_index[winner[0]] + 1
            port_id, vc = winner
            port = ports[port_id]
            port.ready.remove(vc)  # winner sits near the ring front
            q = port.vcs[vc]
            pkt = q.popleft()
            if port.capacity is not None:
                port.pool -= flit_size
                if not port.is_open[vc]:
                    port.is_open[vc] = 1
                    port.open_vcs.append(vc)
            if q:
                schedule_ready(port_id, vc, max(t + 1, q[0].base_t + pipeline))
            if not port.ready and port_id in armed:
                del armed[port_id]
            if pkt.hop == 0:
                in_network += 1
                if not pkt.injected:
                    pkt.injected = True
                    stats_injected_unique += 1
                    if t >= warmup:
                        stats_injected_window += 1
            pkt.hop += 1
            nxt = pkt.path[pkt.hop]
            if nxt != pkt.dst:
                ports[chan].pool += flit_size
            if flit_size > 1:
                busy_until[chan] = t + flit_size
            if t >= warmup:
                departures[chan] = departures.get(chan, 0) + 1
            arrivals.setdefault(t + link_latency + flit_size - 1, []).append(
                (pkt, nxt, chan)
            )

    measured = sim_cycles - warmup
    reception_rate = stats_received_window / len(active_hosts) / measured
    source_queued = sum(
        len(ports[2 * num_links + h].vcs[0])
        for h in active_hosts
        if (2 * num_links + h) in ports
    )
    for bucket in requeues.values():
        awaiting_retransmit += 0  # backoff packets already counted
    util: dict[int, float] = {}
    for i in range(num_links):
        fwd = departures.get(2 * i, 0)
        rev = departures.get(2 * i + 1, 0)
        if fwd or rev:
            util[i] = max(fwd, rev) * flit_size / measured
    return SimStats(
        topology=topology.name(),
        pattern=pattern.kind.value,
        routing_mode=routing_mode,
        injection_rate=rate,
        sim_cycles=sim_cycles,
        warmup_cycles=warmup,
        active_hosts=len(active_hosts),
        packets_generated=stats_generated,
        packets_injected=stats_injected_unique,
        packets_received=stats_received,
        dropped=stats_dropped,
        retransmitted=stats_retransmitted,
        in_flight=in_network,
        awaiting_retransmit=awaiting_retransmit,
        source_queued=source_queued,
        reception_rate=reception_rate,
        avg_packet_latency=(latency_sum / stats_received_window)
        if stats_received_window
        else 0.0,
        per_link_utilization=util,
        saturated=reception_rate < 0.95 * rate,
    )


def sweep_injection(
    topology: Topology,
    routing_mode: str,
    pattern: TrafficPattern,
    rates: list[float],
    config: SimConfig,
) -> list[tuple[float, SimStats]]:
    """Independent seeded simulations per rate; each point's ``saturated``
    flag marks reception falling under 95% of the offered rate.
    """
    if not rates:
        raise TopologyError("rates list is empty")
    if any(b <= a for a, b in zip(rates, rates[1:])):
        raise TopologyError("rates must be strictly increasing")
    curve = []
    for idx, rate in enumerate(rates):
        point_config = replace(
            config,
            injection_rate=rate,
            pattern=pattern,
            seed=config.seed * 7919 + idx,
        )
        curve.append((rate, run_simulation(topology, routing_mode, point_config)))
    return curve


def saturation_reception_rate(curve: list[tuple[float, SimStats]]) -> float:
    """Plateau reception rate: the maximum reception over the sweep."""
    return max(stats.reception_rate for _, stats in curve)
