"""DPRAODV: screen route replies for implausible sequence-number jumps.

Every node keeps a threshold equal to the mean sequence-number jump
(RREP seq minus routing-table seq) it accepted during the previous time
slot. A reply jumping further than that is treated as forged: the replier
is blacklisted, the reply is neither installed nor forwarded, and an ALARM
naming the replier is flooded so every other node discards its replies too.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .aodv import AodvAgent, AodvParams
from .engine import TIMER
from .packets import Alarm, Rrep

if TYPE_CHECKING:
    from .network import Network


class Verdict(enum.Enum):
    ACCEPT = "accept"
    SUSPECT = "suspect"
    IGNORE = "ignore"


@dataclass(frozen=True)
class DpraodvParams:
    initial_threshold: float = 10.0
    slot_length: float = 5.0
    alarm_scope: str = "flood"    # or "neighbors"
    check_mode: str = "diff"      # or "absolute"

    def __post_init__(self):
        if self.initial_threshold <= 0:
            raise ValueError("initial_threshold must be positive")
        if self.slot_length <= 0:
            raise ValueError("slot_length must be positive")
        if self.alarm_scope not in ("flood", "neighbors"):
            raise ValueError(f"unknown alarm_scope {self.alarm_scope!r}")
        if self.check_mode not in ("diff", "absolute"):
            raise ValueError(f"unknown check_mode {self.check_mode!r}")


@dataclass
class ThresholdState:
    threshold: float = 10.0
    slot_length: float = 5.0
    slot_end: float = 5.0
    slot_samples: list[float] = field(default_factory=list)
    # (slot_end, samples of that slot, threshold after the update)
    history: list[tuple[float, tuple[float, ...], float]] = field(default_factory=list)

    @classmethod
    def starting(cls, initial_threshold: float, slot_length: float, now: float = 0.0) -> "ThresholdState":
        return cls(threshold=initial_threshold, slot_length=slot_length, slot_end=now + slot_length)

    def add_sample(self, diff: float) -> None:
        self.slot_samples.append(diff)

    def update_threshold(self) -> float:
        samples = tuple(self.slot_samples)
        if samples:
            self.threshold = math.fsum(samples) / len(samples)
        self.history.append((self.slot_end, samples, self.threshold))
        self.slot_samples.clear()
        self.slot_end += self.slot_length
        return self.threshold


class DpraodvAgent(AodvAgent):
    def __init__(self, node_id: int, net: "Network", params: AodvParams = AodvParams(),
                 dparams: DpraodvParams = DpraodvParams()):
        super().__init__(node_id, net, params)
        self.dparams = dparams
        self.threshold = ThresholdState.starting(dparams.initial_threshold, dparams.slot_length, self.now)
        self.blacklist: set[int] = set()
        self.blacklisted_at: dict[int, float] = {}
        self.alarm_id = 0
        self.seen_alarms: set[tuple[int, int]] = set()
        self.suspect_rreps: list[tuple[float, Rrep, float]] = []
        self.ignored_rreps = 0
        # destination seq requested by the latest RREQ seen per (origin, destination)
        self.requested_seq: dict[tuple[int, int], int] = {}
        net.sim.schedule(self.threshold.slot_end, node_id, TIMER, ("slot", None))

    def on_timer(self, label: str, payload) -> None:
        if label == "slot":
            self.update_threshold()
        else:
            super().on_timer(label, payload)

    def update_threshold(self) -> float:
        value = self.threshold.update_threshold()
        self.net.sim.schedule(self.threshold.slot_end, self.id, TIMER, ("slot", None))
        return value

    def baseline_seq(self, rrep: Rrep) -> int:
        """Sequence number a reply is measured against.

        The routing-table entry when there is one, raised to the destination
        sequence number the matching RREQ asked for.
        """
        entry = self.table.get(rrep.destination)
        table_seq = entry.dest_seq if entry is not None else 0
        return max(table_seq, self.requested_seq.get((rrep.origin, rrep.destination), 0))

    def originate_rreq(self, destination: int):
        rreq = super().originate_rreq(destination)
        self.requested_seq[(self.id, destination)] = rreq.dest_seq_known
        return rreq

    def handle_rreq(self, rreq, frm: int) -> None:
        if (rreq.origin, rreq.broadcast_id) not in self.seen_rreq:
            self.requested_seq[(rreq.origin, rreq.destination)] = rreq.dest_seq_known
        super().handle_rreq(rreq, frm)

    def check_rrep(self, rrep: Rrep, frm: int) -> Verdict:
        if rrep.replier in self.blacklist or frm in self.blacklist:
            return Verdict.IGNORE
        diff = rrep.dest_seq - self.baseline_seq(rrep)
        if diff <= 0:
            # not fresher than what we hold: the normal AODV rules decide
            return Verdict.ACCEPT
        value = diff if self.dparams.check_mode == "diff" else rrep.dest_seq
        if value > self.threshold.threshold:
            return Verdict.SUSPECT
        self.threshold.add_sample(diff)
        return Verdict.ACCEPT

    def handle_rrep(self, rrep: Rrep, frm: int) -> None:
        if rrep.destination == self.id:
            return
        verdict = self.check_rrep(rrep, frm)
        if verdict is Verdict.IGNORE:
            self.ignored_rreps += 1
        elif verdict is Verdict.SUSPECT:
            self.on_suspect(rrep)
        else:
            super().handle_rrep(rrep, frm)

    def on_suspect(self, rrep: Rrep) -> None:
        self.suspect_rreps.append((self.now, rrep, self.threshold.threshold))
        if rrep.replier in self.blacklist:
            return
        self._blacklist(rrep.replier)
        self.alarm_id += 1
        alarm = Alarm(rrep.replier, self.id, self.alarm_id)
        self.seen_alarms.add((self.id, self.alarm_id))
        self.net.radio.broadcast(self.id, alarm)

    def handle_other(self, packet, frm: int) -> None:
        if isinstance(packet, Alarm):
            self.handle_alarm(packet, frm)

    def handle_alarm(self, alarm: Alarm, frm: int) -> None:
        key = (alarm.originator, alarm.alarm_id)
        if key in self.seen_alarms:
            return
        self.seen_alarms.add(key)
        if alarm.suspect != self.id:
            self._blacklist(alarm.suspect)
        if self.dparams.alarm_scope == "flood":
            self.net.radio.broadcast(self.id, alarm)

    def _blacklist(self, suspect: int) -> None:
        if suspect in self.blacklist:
            return
        self.blacklist.add(suspect)
        self.blacklisted_at[suspect] = self.now
        # stop forwarding through the suspect
        for e in self.table.via(suspect):
            self.table.invalidate(e.destination, self.now)
