"""Discrete-event core: clock, ordered event queue and named random streams."""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass
from typing import Any, Callable

# event kinds
PACKET_DELIVERY = "packet_delivery"
TIMER = "timer"
TRAFFIC_TICK = "traffic_tick"


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current clock."""


@dataclass
class Event:
    time: float
    tie_seq: int
    target: int
    kind: str
    payload: Any = None


class RandomStream:
    """A reproducible generator keyed by ``(master_seed, label)``.

    The seed is derived through SHA-256 so the mapping does not depend on
    Python's per-process string hashing.
    """

    def __init__(self, master_seed: int, label: str):
        self.label = label
        self.master_seed = master_seed
        digest = hashlib.sha256(f"{master_seed}/{label}".encode()).digest()
        self._rng = random.Random(int.from_bytes(digest[:8], "big"))

    def uniform_int(self, lo: int, hi: int) -> int:
        if lo > hi:
            raise ValueError(f"uniform_int: empty range [{lo}, {hi}]")
        return self._rng.randint(lo, hi)

    def uniform(self, lo: float, hi: float) -> float:
        return self._rng.uniform(lo, hi)

    def random(self) -> float:
        return self._rng.random()

    def sample(self, population, k):
        return self._rng.sample(population, k)

    def __repr__(self):
        return f"RandomStream({self.master_seed!r}, {self.label!r})"


def uniform_int(stream: RandomStream, lo: int, hi: int) -> int:
    return stream.uniform_int(lo, hi)


class Simulator:
    """Single-threaded event loop.

    Events at equal times dispatch in insertion order. Handlers are looked up
    by event kind and receive the :class:`Event`.
    """

    def __init__(self, master_seed: int = 0):
        self.now = 0.0
        self.master_seed = master_seed
        # heap of (time, tie_seq, event)
        self._queue: list[tuple[float, int, Event]] = []
        self._tie = 0
        self._handlers: dict[str, Callable[[Event], None]] = {}
        self._streams: dict[str, RandomStream] = {}
        self.dispatched = 0
        self.trace: list[tuple[float, int, int, str]] | None = None

    def stream(self, label: str) -> RandomStream:
        s = self._streams.get(label)
        if s is None:
            s = self._streams[label] = RandomStream(self.master_seed, label)
        return s

    def register(self, kind: str, handler: Callable[[Event], None]) -> None:
        self._handlers[kind] = handler

    def schedule(self, time: float, target: int, kind: str, payload: Any = None) -> Event:
        if time < self.now:
            raise SchedulingError(
                f"past event: {kind} for node {target} at t={time!r} < clock {self.now!r}"
            )
        ev = Event(time, self._tie, target, kind, payload)
        self._tie += 1
        heapq.heappush(self._queue, (time, ev.tie_seq, ev))
        return ev

    def schedule_in(self, delay: float, target: int, kind: str, payload: Any = None) -> Event:
        return self.schedule(self.now + delay, target, kind, payload)

    def pending(self) -> int:
        return len(self._queue)

    def queued(self) -> list[Event]:
        """Pending events in dispatch order (a copy; the queue is untouched)."""
        return [ev for _, _, ev in sorted(self._queue)]

    def run_until(self, t_end: float) -> int:
        """Dispatch every event with ``time <= t_end``; return how many ran."""
        count = 0
        queue = self._queue
        handlers = self._handlers
        trace = self.trace
        while queue and queue[0][0] <= t_end:
            ev = heapq.heappop(queue)[2]
            self.now = ev.time
            if trace is not None:
                trace.append((ev.time, ev.tie_seq, ev.target, ev.kind))
            handlers[ev.kind](ev)
            count += 1
        if queue:
            self.now = max(self.now, t_end)
        self.dispatched += count
        return count
