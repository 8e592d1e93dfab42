"""CBR flows and the delivery / delay / overhead accounting."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

from .packets import Alarm, Data, is_control

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CbrFlow:
    id: int
    src: int
    dst: int
    start: float
    stop: float
    interval: float = 0.25
    packet_bytes: int = 512

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError("CBR interval must be positive")

    def tick_time(self, k: int) -> float:
        # multiply rather than accumulate so long flows do not drift
        return self.start + k * self.interval

    def packet_count(self) -> int:
        if self.stop <= self.start:
            return 0
        n = math.ceil((self.stop - self.start) / self.interval)
        # guard the ceil against representation error at the stop boundary
        while n > 0 and self.tick_time(n - 1) >= self.stop:
            n -= 1
        while self.tick_time(n) < self.stop:
            n += 1
        return n


@dataclass
class FlowStats:
    sent: int = 0
    delivered: int = 0
    delay_sum: float = 0.0


class MetricsAccumulator:
    def __init__(self):
        self.flows: dict[int, FlowStats] = {}
        self.control_tx = 0
        self.data_tx = 0
        self.alarm_tx = 0
        self.tx_by_kind: Counter[str] = Counter()
        self.drops: Counter[str] = Counter()
        self.anomalies: Counter[str] = Counter()
        # (flow, delay, hops) for every delivered packet
        self.deliveries: list[tuple[int, float, int]] = []

    def _flow(self, flow: int) -> FlowStats:
        fs = self.flows.get(flow)
        if fs is None:
            fs = self.flows[flow] = FlowStats()
        return fs

    @property
    def sent(self) -> int:
        return sum(f.sent for f in self.flows.values())

    @property
    def delivered(self) -> int:
        return sum(f.delivered for f in self.flows.values())

    @property
    def delay_sum(self) -> float:
        return math.fsum(f.delay_sum for f in self.flows.values())

    def record_sent(self, pkt: Data) -> None:
        self._flow(pkt.flow).sent += 1

    def record_delivery(self, pkt: Data, now: float) -> None:
        fs = self._flow(pkt.flow)
        delay = now - pkt.sent_at
        fs.delivered += 1
        fs.delay_sum += delay
        self.deliveries.append((pkt.flow, delay, pkt.hops_so_far))

    def record_tx(self, packet) -> None:
        self.tx_by_kind[type(packet).__name__] += 1
        if is_control(packet):
            self.control_tx += 1
            if isinstance(packet, Alarm):
                self.alarm_tx += 1
        else:
            self.data_tx += 1

    def record_drop(self, reason: str, count: int = 1) -> None:
        self.drops[reason] += count

    def record_anomaly(self, what: str) -> None:
        self.anomalies[what] += 1


def compute_pdr(acc: MetricsAccumulator) -> float:
    sent = acc.sent
    if sent == 0:
        log.warning("PDR requested for a run that sent no data; reporting 0")
        return 0.0
    return acc.delivered / sent


def compute_avg_delay(acc: MetricsAccumulator) -> float | None:
    """Mean end-to-end delay over delivered packets; ``None`` if none arrived."""
    if acc.delivered == 0:
        return None
    return acc.delay_sum / acc.delivered


def compute_nro(acc: MetricsAccumulator, include_alarms: bool = True) -> float | None:
    """Control transmissions per delivered data packet."""
    if acc.delivered == 0:
        return None
    control = acc.control_tx if include_alarms else acc.control_tx - acc.alarm_tx
    return control / acc.delivered


@dataclass(frozen=True)
class MetricsReport:
    pdr: float
    avg_delay: float | None
    nro: float | None
    sent: int
    delivered: int
    control_tx: int
    data_tx: int
    alarm_tx: int
    per_flow: dict[int, FlowStats] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def nro_without_alarms(self) -> float | None:
        if self.delivered == 0:
            return None
        return (self.control_tx - self.alarm_tx) / self.delivered

    @classmethod
    def from_accumulator(cls, acc: MetricsAccumulator) -> "MetricsReport":
        warnings = []
        if acc.sent == 0:
            warnings.append("no data sent")
        per_flow = {k: FlowStats(v.sent, v.delivered, v.delay_sum) for k, v in sorted(acc.flows.items())}
        return cls(
            pdr=compute_pdr(acc),
            avg_delay=compute_avg_delay(acc),
            nro=compute_nro(acc),
            sent=acc.sent,
            delivered=acc.delivered,
            control_tx=acc.control_tx,
            data_tx=acc.data_tx,
            alarm_tx=acc.alarm_tx,
            per_flow=per_flow,
            warnings=tuple(warnings),
        )
