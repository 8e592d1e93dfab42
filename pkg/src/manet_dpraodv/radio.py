"""Unit-disk wireless channel with a fixed per-hop latency.

No collisions, queuing or loss: a packet reaches every node within
``tx_range`` of the sender at send time, ``per_hop_latency`` later.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .engine import PACKET_DELIVERY, Simulator
from .mobility import MobilityModel
from .traffic import MetricsAccumulator


class SendResult(enum.Enum):
    DELIVERED = "delivered"
    OUT_OF_RANGE = "out_of_range"


@dataclass(frozen=True)
class ChannelModel:
    tx_range: float = 250.0
    per_hop_latency: float = 0.002

    def __post_init__(self):
        if self.tx_range <= 0 or self.per_hop_latency <= 0:
            raise ValueError("tx_range and per_hop_latency must be positive")


class Radio:
    def __init__(self, sim: Simulator, mobility: MobilityModel, metrics: MetricsAccumulator,
                 model: ChannelModel = ChannelModel()):
        self.sim = sim
        self.mobility = mobility
        self.metrics = metrics
        self.model = model
        self._range_sq = model.tx_range * model.tx_range
        self._nbr_t: float | None = None
        self._nbr_cache: dict[int, list[int]] = {}

    def neighbors(self, node: int, t: float | None = None) -> list[int]:
        """Nodes within range of ``node`` at time ``t``, in id order (closed disk)."""
        t = self.sim.now if t is None else t
        if t != self._nbr_t:
            self._nbr_t = t
            self._nbr_cache = {}
        cached = self._nbr_cache.get(node)
        if cached is not None:
            return cached
        pos = self.mobility.positions_at(t)
        me = pos[node]
        r2 = self._range_sq
        out = []
        for u, p in enumerate(pos):
            if u == node:
                continue
            dx = p.x - me.x
            dy = p.y - me.y
            if dx * dx + dy * dy <= r2:
                out.append(u)
        self._nbr_cache[node] = out
        return out

    def in_range(self, a: int, b: int, t: float | None = None) -> bool:
        t = self.sim.now if t is None else t
        pa = self.mobility.position_at(a, t)
        pb = self.mobility.position_at(b, t)
        dx = pa.x - pb.x
        dy = pa.y - pb.y
        return dx * dx + dy * dy <= self._range_sq

    def broadcast(self, sender: int, packet) -> list[int]:
        self.metrics.record_tx(packet)
        receivers = self.neighbors(sender)
        at = self.sim.now + self.model.per_hop_latency
        for u in receivers:
            self.sim.schedule(at, u, PACKET_DELIVERY, (packet, sender))
        return receivers

    def unicast(self, sender: int, receiver: int, packet) -> SendResult:
        """Send to one neighbor; ``OUT_OF_RANGE`` doubles as the link-break notice.

        A failed unicast is not counted as a transmission.
        """
        if receiver == sender or not self.in_range(sender, receiver):
            return SendResult.OUT_OF_RANGE
        self.metrics.record_tx(packet)
        self.sim.schedule(self.sim.now + self.model.per_hop_latency, receiver, PACKET_DELIVERY,
                          (packet, sender))
        return SendResult.DELIVERED
