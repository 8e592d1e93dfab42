"""Wire-level messages exchanged between node agents."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Rreq:
    origin: int
    origin_seq: int
    broadcast_id: int
    destination: int
    dest_seq_known: int
    hop_count: int = 0


@dataclass(frozen=True)
class Rrep:
    destination: int
    dest_seq: int
    origin: int
    hop_count: int
    lifetime: float
    replier: int


@dataclass(frozen=True)
class Rerr:
    unreachable: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.unreachable:
            raise ValueError("RERR must list at least one destination")


@dataclass(frozen=True)
class Alarm:
    suspect: int
    originator: int
    alarm_id: int


@dataclass(frozen=True)
class Data:
    flow: int
    src: int
    dst: int
    payload_bytes: int
    sent_at: float
    hops_so_far: int = 0
    seq: int = 0


CONTROL_KINDS = (Rreq, Rrep, Rerr, Alarm)


def is_control(packet) -> bool:
    return not isinstance(packet, Data)
