"""On-demand distance-vector routing agent.

Route discovery floods RREQs and unicasts RREPs back along reverse routes.
Destination sequence numbers decide freshness: an advertised route replaces
the installed one only with a higher sequence number, or the same sequence
number and fewer hops. Link breaks are noticed when a unicast fails and are
reported upstream with RERR.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .engine import TIMER
from .packets import Data, Rerr, Rrep, Rreq
from .radio import SendResult

if TYPE_CHECKING:
    from .network import Network

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AodvParams:
    route_lifetime: float = 10.0
    discovery_timeout: float = 1.0
    discovery_retries: int = 2
    buffer_cap: int = 64


@dataclass
class RouteEntry:
    destination: int
    next_hop: int
    hop_count: int
    dest_seq: int
    expires_at: float
    precursors: set[int] = field(default_factory=set)
    valid: bool = True

    def usable(self, now: float) -> bool:
        return self.valid and now < self.expires_at


@dataclass
class PendingDiscovery:
    destination: int
    broadcast_id: int
    retries_left: int
    timeout_at: float
    buffered: deque = field(default_factory=deque)


class RoutingTable:
    """Destination-indexed routes.

    ``history`` (when enabled) records every install as
    ``(time, destination, dest_seq, hop_count, next_hop, tag)`` and every
    invalidation with ``next_hop = -1``.
    """

    def __init__(self, record_history: bool = False):
        self.entries: dict[int, RouteEntry] = {}
        self.history: list[tuple] | None = [] if record_history else None

    def get(self, dest: int) -> RouteEntry | None:
        return self.entries.get(dest)

    def lookup(self, dest: int, now: float) -> RouteEntry | None:
        e = self.entries.get(dest)
        if e is not None and e.usable(now):
            return e
        return None

    @staticmethod
    def is_better(entry: RouteEntry | None, dest_seq: int, hop_count: int) -> bool:
        if entry is None:
            return True
        return dest_seq > entry.dest_seq or (dest_seq == entry.dest_seq and hop_count < entry.hop_count)

    def offer(self, dest: int, next_hop: int, hop_count: int, dest_seq: int, now: float,
              lifetime: float, tag=None) -> bool:
        """Install the route if it beats the current entry; return whether it did."""
        e = self.entries.get(dest)
        if not self.is_better(e, dest_seq, hop_count):
            return False
        if e is None:
            self.entries[dest] = RouteEntry(dest, next_hop, hop_count, dest_seq, now + lifetime)
        else:
            e.next_hop = next_hop
            e.hop_count = hop_count
            e.dest_seq = dest_seq
            e.expires_at = now + lifetime
            e.valid = True
        if self.history is not None:
            self.history.append((now, dest, dest_seq, hop_count, next_hop, tag))
        return True

    def invalidate(self, dest: int, now: float, dest_seq: int | None = None) -> RouteEntry | None:
        e = self.entries.get(dest)
        if e is None or not e.valid:
            return None
        e.valid = False
        e.dest_seq = e.dest_seq + 1 if dest_seq is None else max(e.dest_seq, dest_seq)
        if self.history is not None:
            self.history.append((now, dest, e.dest_seq, e.hop_count, -1, "invalidate"))
        return e

    def via(self, next_hop: int) -> list[RouteEntry]:
        return [e for e in self.entries.values() if e.valid and e.next_hop == next_hop]


class AodvAgent:
    """Routing state and packet handlers for one honest node."""

    def __init__(self, node_id: int, net: "Network", params: AodvParams = AodvParams()):
        self.id = node_id
        self.net = net
        self.params = params
        self.seq = 0
        self.broadcast_id = 0
        self.table = RoutingTable(net.record_history)
        self.seen_rreq: set[tuple[int, int]] = set()
        self.rreq_processed: Counter = Counter()
        self.pending: dict[int, PendingDiscovery] = {}
        self.last_origination: dict[int, float] = {}
        self.seq_history: list[int] | None = [] if net.record_history else None

    # plumbing

    @property
    def now(self) -> float:
        return self.net.sim.now

    def _bump_seq(self, value: int) -> None:
        self.seq = value
        if self.seq_history is not None:
            self.seq_history.append(value)

    def _send(self, next_hop: int, packet) -> bool:
        if self.net.radio.unicast(self.id, next_hop, packet) is SendResult.OUT_OF_RANGE:
            self.link_broken(next_hop)
            return False
        return True

    def receive(self, packet, frm: int) -> None:
        if isinstance(packet, Data):
            self.forward_data(packet, frm)
        elif isinstance(packet, Rreq):
            self.handle_rreq(packet, frm)
        elif isinstance(packet, Rrep):
            self.handle_rrep(packet, frm)
        elif isinstance(packet, Rerr):
            self.handle_rerr(packet, frm)
        else:
            self.handle_other(packet, frm)

    def handle_other(self, packet, frm: int) -> None:
        # plain AODV does not understand ALARM; drop it unprocessed
        pass

    def on_timer(self, label: str, payload) -> None:
        if label == "discovery":
            self._discovery_timeout(*payload)

    # discovery

    def originate_rreq(self, destination: int) -> Rreq:
        self._bump_seq(self.seq + 1)
        self.broadcast_id += 1
        entry = self.table.get(destination)
        known = entry.dest_seq if entry is not None else 0
        rreq = Rreq(self.id, self.seq, self.broadcast_id, destination, known, 0)
        self.seen_rreq.add((self.id, self.broadcast_id))
        p = self.params
        pend = self.pending.get(destination)
        timeout_at = self.now + p.discovery_timeout
        if pend is None:
            self.pending[destination] = PendingDiscovery(destination, self.broadcast_id,
                                                         p.discovery_retries, timeout_at)
        else:
            pend.broadcast_id = self.broadcast_id
            pend.timeout_at = timeout_at
        self.net.sim.schedule(timeout_at, self.id, TIMER, ("discovery", (destination, self.broadcast_id)))
        self.net.radio.broadcast(self.id, rreq)
        return rreq

    def _discovery_timeout(self, destination: int, broadcast_id: int) -> None:
        pend = self.pending.get(destination)
        if pend is None or pend.broadcast_id != broadcast_id:
            return
        if self.table.lookup(destination, self.now) is not None:
            self._flush(destination)
            return
        if pend.retries_left > 0:
            pend.retries_left -= 1
            self.originate_rreq(destination)
            return
        del self.pending[destination]
        if pend.buffered:
            self.net.metrics.record_drop("discovery_failed", len(pend.buffered))

    def handle_rreq(self, rreq: Rreq, frm: int) -> None:
        key = (rreq.origin, rreq.broadcast_id)
        if key in self.seen_rreq:
            return
        self.seen_rreq.add(key)
        self.rreq_processed[key] += 1
        now = self.now
        lifetime = self.params.route_lifetime
        self.table.offer(rreq.origin, frm, rreq.hop_count + 1, rreq.origin_seq, now, lifetime, "rreq")
        if rreq.destination == self.id:
            # smallest number strictly fresher than what the requester knows
            self._bump_seq(max(self.seq, rreq.dest_seq_known + 1))
            rrep = Rrep(self.id, self.seq, rreq.origin, 0, lifetime, self.id)
            self._send_rrep_toward_origin(rrep)
            return
        entry = self.table.lookup(rreq.destination, now)
        if entry is not None and entry.dest_seq > rreq.dest_seq_known:
            rev = self.table.lookup(rreq.origin, now)
            if rev is not None:
                entry.precursors.add(rev.next_hop)
            rrep = Rrep(rreq.destination, entry.dest_seq, rreq.origin, entry.hop_count,
                        entry.expires_at - now, self.id)
            self._send_rrep_toward_origin(rrep)
            return
        self.net.radio.broadcast(self.id, replace(rreq, hop_count=rreq.hop_count + 1))

    def _send_rrep_toward_origin(self, rrep: Rrep) -> None:
        rev = self.table.lookup(rrep.origin, self.now)
        if rev is None:
            self.net.metrics.record_anomaly("rrep_without_reverse_route")
            return
        self._send(rev.next_hop, rrep)

    def handle_rrep(self, rrep: Rrep, frm: int) -> None:
        if rrep.destination == self.id:
            return
        now = self.now
        hops = rrep.hop_count + 1
        installed = self.table.offer(rrep.destination, frm, hops, rrep.dest_seq, now,
                                     self.params.route_lifetime, rrep.replier)
        if rrep.origin == self.id:
            if self.table.lookup(rrep.destination, now) is not None:
                self._flush(rrep.destination)
            return
        if not installed:
            return
        rev = self.table.lookup(rrep.origin, now)
        if rev is None:
            self.net.metrics.record_anomaly("rrep_without_reverse_route")
            return
        self.table.entries[rrep.destination].precursors.add(rev.next_hop)
        self._send(rev.next_hop, replace(rrep, hop_count=hops))

    def _flush(self, destination: int) -> None:
        pend = self.pending.pop(destination, None)
        if pend is None:
            return
        while pend.buffered:
            self.forward_data(pend.buffered.popleft())

    # data plane

    def originate_data(self, pkt: Data) -> None:
        self.net.metrics.record_sent(pkt)
        self.last_origination[pkt.dst] = self.now
        self.forward_data(pkt)

    def forward_data(self, pkt: Data, frm: int | None = None) -> None:
        metrics = self.net.metrics
        if pkt.dst == self.id:
            metrics.record_delivery(pkt, self.now)
            return
        now = self.now
        entry = self.table.lookup(pkt.dst, now)
        if entry is not None:
            entry.expires_at = max(entry.expires_at, now + self.params.route_lifetime)
            if frm is not None:
                entry.precursors.add(frm)
            if not self._send(entry.next_hop, replace(pkt, hops_so_far=pkt.hops_so_far + 1)):
                metrics.record_drop("link_break")
            return
        if pkt.src != self.id:
            metrics.record_drop("no_route")
            stale = self.table.get(pkt.dst)
            seq = stale.dest_seq if stale is not None else 0
            self.net.radio.broadcast(self.id, Rerr(((pkt.dst, seq),)))
            return
        pend = self.pending.get(pkt.dst)
        if pend is None:
            self.originate_rreq(pkt.dst)
            pend = self.pending[pkt.dst]
        if len(pend.buffered) >= self.params.buffer_cap:
            pend.buffered.popleft()
            metrics.record_drop("buffer_overflow")
        pend.buffered.append(pkt)

    # route maintenance

    def link_broken(self, next_hop: int) -> None:
        now = self.now
        lost = []
        notify = False
        for e in self.table.via(next_hop):
            self.table.invalidate(e.destination, now)
            lost.append((e.destination, e.dest_seq))
            notify = notify or bool(e.precursors)
        if lost and notify:
            self.net.radio.broadcast(self.id, Rerr(tuple(lost)))
        self._rediscover([d for d, _ in lost])

    def handle_rerr(self, rerr: Rerr, frm: int) -> None:
        now = self.now
        lost = []
        notify = False
        for dest, seq in rerr.unreachable:
            e = self.table.get(dest)
            if e is None or not e.valid or e.next_hop != frm:
                continue
            self.table.invalidate(dest, now, seq)
            lost.append((dest, e.dest_seq))
            notify = notify or bool(e.precursors)
        if lost and notify:
            self.net.radio.broadcast(self.id, Rerr(tuple(lost)))
        self._rediscover([d for d, _ in lost])

    def _rediscover(self, destinations) -> None:
        # sources with live traffic restart discovery right away
        horizon = self.params.route_lifetime
        for d in destinations:
            t = self.last_origination.get(d)
            if t is not None and self.now - t < horizon and d not in self.pending:
                self.originate_rreq(d)
