"""Wires one simulation run together from a :class:`ScenarioConfig`."""

from __future__ import annotations

from .adversary import BlackholeAgent, BlackholeConfig
from .aodv import AodvAgent, AodvParams
from .config import ScenarioConfig
from .dpraodv import DpraodvAgent, DpraodvParams
from .engine import PACKET_DELIVERY, TIMER, TRAFFIC_TICK, Event, RandomStream, Simulator
from .mobility import MobilityModel
from .packets import Data
from .radio import ChannelModel, Radio
from .traffic import CbrFlow, MetricsAccumulator, MetricsReport

# source/destination pair of the reference experiment
REFERENCE_PAIR = (2, 7)


def assign_flows(cfg: ScenarioConfig, stream: RandomStream) -> list[CbrFlow]:
    """Resolve explicit flows, or draw ``n_sources`` random ones.

    Random flows keep the reference pair first when it exists and otherwise
    prefer endpoints not already used by another flow. Start times are
    spread over the first tenth of the run (at most 10 s).
    """
    def make(i, src, dst, start=None, stop=None, interval=None, nbytes=None):
        return CbrFlow(
            id=i, src=src, dst=dst,
            start=1.0 if start is None else start,
            stop=cfg.sim_time_s if stop is None else stop,
            interval=cfg.cbr_interval_s if interval is None else interval,
            packet_bytes=cfg.cbr_packet_bytes if nbytes is None else nbytes,
        )

    if cfg.flows is not None:
        return [make(i, f.src, f.dst, f.start, f.stop, f.interval, f.packet_bytes)
                for i, f in enumerate(cfg.flows)]

    bad = set(cfg.malicious_nodes)
    honest = [n for n in range(cfg.node_count) if n not in bad]
    if len(honest) < 2:
        return []
    window = min(10.0, 0.1 * cfg.sim_time_s)
    pairs = []
    used: set[int] = set()
    src_used: set[int] = set()
    s, d = REFERENCE_PAIR
    if cfg.n_sources > 0 and s in honest and d in honest:
        pairs.append((s, d))
        used |= {s, d}
        src_used.add(s)
    while len(pairs) < cfg.n_sources:
        free = [n for n in honest if n not in used]
        srcs = free or [n for n in honest if n not in src_used] or honest
        src = srcs[stream.uniform_int(0, len(srcs) - 1)]
        dsts = [n for n in free if n != src] or [n for n in honest if n != src]
        dst = dsts[stream.uniform_int(0, len(dsts) - 1)]
        pairs.append((src, dst))
        used |= {src, dst}
        src_used.add(src)
    return [make(i, src, dst, start=stream.uniform(0.0, window)) for i, (src, dst) in enumerate(pairs)]


class Network:
    def __init__(self, cfg: ScenarioConfig, record_history: bool = False, trace: bool = False):
        cfg.validate()
        self.cfg = cfg
        self.record_history = record_history
        self.sim = Simulator(cfg.master_seed)
        if trace:
            self.sim.trace = []
        self.metrics = MetricsAccumulator()
        self.mobility = MobilityModel(
            cfg.node_count,
            self.sim.stream("mobility"),
            terrain=(cfg.terrain_width_m, cfg.terrain_height_m),
            pause_time=cfg.pause_time_s,
            max_speed=cfg.max_speed_mps,
            min_speed=cfg.min_speed_mps,
            horizon=cfg.sim_time_s,
            static_positions=list(cfg.positions) if cfg.positions is not None else None,
        )
        self.radio = Radio(self.sim, self.mobility, self.metrics,
                           ChannelModel(cfg.tx_range_m, cfg.per_hop_latency_s))
        self.flows = assign_flows(cfg, self.sim.stream("traffic"))

        aparams = AodvParams(cfg.route_lifetime_s, cfg.discovery_timeout_s,
                             cfg.discovery_retries, cfg.buffer_cap)
        dparams = DpraodvParams(cfg.initial_threshold, cfg.slot_length_s,
                                cfg.alarm_scope, cfg.check_mode)
        bh = BlackholeConfig(cfg.seq_offset_lo, cfg.seq_offset_hi, cfg.reply_hop_count)
        malicious = set(cfg.malicious_nodes) if cfg.attacked else set()
        self.agents: list = []
        for n in range(cfg.node_count):
            if n in malicious:
                agent = BlackholeAgent(n, self, bh, self.sim.stream("attacker"), cfg.route_lifetime_s)
            elif cfg.dpraodv_enabled:
                agent = DpraodvAgent(n, self, aparams, dparams)
            else:
                agent = AodvAgent(n, self, aparams)
            self.agents.append(agent)

        self.sim.register(PACKET_DELIVERY, self._on_delivery)
        self.sim.register(TIMER, self._on_timer)
        self.sim.register(TRAFFIC_TICK, self._on_tick)
        for flow in self.flows:
            self.generate_cbr(flow)

    def generate_cbr(self, flow: CbrFlow) -> None:
        if flow.packet_count() > 0 and flow.start <= self.cfg.sim_time_s:
            self.sim.schedule(flow.start, flow.src, TRAFFIC_TICK, (flow, 0))

    def _on_delivery(self, ev: Event) -> None:
        packet, frm = ev.payload
        self.agents[ev.target].receive(packet, frm)

    def _on_timer(self, ev: Event) -> None:
        label, payload = ev.payload
        self.agents[ev.target].on_timer(label, payload)

    def _on_tick(self, ev: Event) -> None:
        flow, k = ev.payload
        pkt = Data(flow.id, flow.src, flow.dst, flow.packet_bytes, self.sim.now, 0, k)
        nxt = flow.tick_time(k + 1)
        if nxt < flow.stop:
            self.sim.schedule(nxt, flow.src, TRAFFIC_TICK, (flow, k + 1))
        self.agents[flow.src].originate_data(pkt)

    def run(self) -> MetricsReport:
        self.sim.run_until(self.cfg.sim_time_s)
        return self.report()

    def report(self) -> MetricsReport:
        return MetricsReport.from_accumulator(self.metrics)

    def blackholes(self) -> list[BlackholeAgent]:
        return [a for a in self.agents if isinstance(a, BlackholeAgent)]

    def honest_agents(self) -> list[AodvAgent]:
        return [a for a in self.agents if isinstance(a, AodvAgent)]
