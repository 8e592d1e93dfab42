"""Blackhole node: answers every route request with a forged, very fresh
route and then swallows whatever traffic it attracts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .engine import RandomStream
from .packets import Data, Rrep, Rreq
from .radio import SendResult

if TYPE_CHECKING:
    from .network import Network


@dataclass(frozen=True)
class BlackholeConfig:
    seq_offset_lo: int = 15
    seq_offset_hi: int = 200
    reply_hop_count: int = 1

    def __post_init__(self):
        if self.seq_offset_lo > self.seq_offset_hi:
            raise ValueError("seq_offset_lo must not exceed seq_offset_hi")


class BlackholeAgent:
    def __init__(self, node_id: int, net: "Network", config: BlackholeConfig, stream: RandomStream,
                 route_lifetime: float = 10.0):
        self.id = node_id
        self.net = net
        self.config = config
        self.stream = stream
        self.route_lifetime = route_lifetime
        self.seen_rreq: set[tuple[int, int]] = set()
        self.forged: list[Rrep] = []
        self.swallowed = 0

    def receive(self, packet, frm: int) -> None:
        if isinstance(packet, Rreq):
            self.handle_rreq(packet, frm)
        elif isinstance(packet, Data):
            self.handle_data(packet)
        # RREP, RERR and ALARM are neither relayed nor acted on

    def on_timer(self, label, payload) -> None:
        pass

    def handle_rreq(self, rreq: Rreq, frm: int) -> Rrep | None:
        key = (rreq.origin, rreq.broadcast_id)
        if key in self.seen_rreq:
            return None
        self.seen_rreq.add(key)
        offset = self.stream.uniform_int(self.config.seq_offset_lo, self.config.seq_offset_hi)
        rrep = Rrep(
            destination=rreq.destination,
            dest_seq=rreq.dest_seq_known + offset,
            origin=rreq.origin,
            hop_count=self.config.reply_hop_count,
            lifetime=self.route_lifetime,
            replier=self.id,
        )
        # reply straight back to whoever relayed the request
        if self.net.radio.unicast(self.id, frm, rrep) is SendResult.DELIVERED:
            self.forged.append(rrep)
        return rrep

    def handle_data(self, pkt: Data) -> None:
        self.swallowed += 1
        self.net.metrics.record_drop("blackhole")
