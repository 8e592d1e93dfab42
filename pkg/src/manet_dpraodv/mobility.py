"""Random-waypoint mobility inside a rectangular terrain."""

from __future__ import annotations

import bisect
import hashlib
import math
import struct
from dataclasses import dataclass, field

from .engine import RandomStream


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class WaypointState:
    """One leg: sit at ``current`` until ``leg_start`` then move to ``target``."""

    current: Position
    target: Position
    speed: float
    pause_until: float
    leg_start: float
    length: float = field(init=False, repr=False, compare=False)
    arrival: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        length = self.current.distance(self.target)
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "arrival", self.leg_start + length / self.speed)

    def position_at(self, t: float) -> Position:
        if t <= self.leg_start:
            return self.current
        travelled = self.speed * (t - self.leg_start)
        if travelled >= self.length:
            return self.target
        f = travelled / self.length
        c, g = self.current, self.target
        return Position(c.x + f * (g.x - c.x), c.y + f * (g.y - c.y))


def init_positions(node_count: int, terrain: tuple[float, float], stream: RandomStream) -> list[Position]:
    w, h = terrain
    return [Position(stream.uniform(0.0, w), stream.uniform(0.0, h)) for _ in range(node_count)]


def draw_speed(stream: RandomStream, min_speed: float, max_speed: float) -> float:
    # uniform on (min_speed, max_speed]
    if max_speed <= min_speed:
        return max_speed
    return max_speed - stream.random() * (max_speed - min_speed)


def advance_waypoint(
    arrived_at: Position,
    now: float,
    stream: RandomStream,
    terrain: tuple[float, float],
    pause_time: float,
    min_speed: float,
    max_speed: float,
) -> WaypointState:
    """Start the pause at ``arrived_at`` and pick the next leg."""
    w, h = terrain
    target = Position(stream.uniform(0.0, w), stream.uniform(0.0, h))
    speed = draw_speed(stream, min_speed, max_speed)
    pause_until = now + pause_time
    return WaypointState(arrived_at, target, speed, pause_until, pause_until)


class MobilityModel:
    """Per-node trajectories, evaluated lazily from their waypoint legs.

    All legs up to ``horizon`` are drawn at construction, node by node, from a
    single stream. The trajectories therefore depend only on the stream and
    never on which protocol later queries them or in what order.
    """

    def __init__(
        self,
        node_count: int,
        stream: RandomStream,
        terrain: tuple[float, float] = (800.0, 800.0),
        pause_time: float = 2.0,
        max_speed: float = 60.0,
        min_speed: float = 1.0,
        horizon: float = 1000.0,
        static_positions: list[tuple[float, float]] | None = None,
    ):
        self.terrain = terrain
        self.pause_time = pause_time
        self.max_speed = max_speed
        self.min_speed = min_speed
        self.horizon = horizon
        self._stream = stream
        if static_positions is not None:
            if len(static_positions) != node_count:
                raise ValueError("static_positions must list one position per node")
            starts = [Position(float(x), float(y)) for x, y in static_positions]
        else:
            starts = init_positions(node_count, terrain, stream)
        self.initial = starts
        self.static = static_positions is not None or max_speed <= 0
        self._legs: list[list[WaypointState]] = []
        self._starts: list[list[float]] = []
        for p in starts:
            legs: list[WaypointState] = []
            if not self.static:
                # nodes begin with a pause at their initial position
                legs.append(self._next_leg(p, 0.0))
                while legs[-1].arrival < horizon:
                    legs.append(self._next_leg(legs[-1].target, legs[-1].arrival))
            self._legs.append(legs)
            self._starts.append([leg.leg_start for leg in legs])
        self._cache_t: float | None = None
        self._cache: list[Position] = []

    def _next_leg(self, at: Position, now: float) -> WaypointState:
        return advance_waypoint(
            at, now, self._stream, self.terrain, self.pause_time, self.min_speed, self.max_speed
        )

    @property
    def node_count(self) -> int:
        return len(self.initial)

    def legs(self, node: int) -> list[WaypointState]:
        return self._legs[node]

    def script(self, node: int, legs: list[WaypointState]) -> None:
        """Replace a node's trajectory with hand-written legs (the last leg
        is held at its target forever)."""
        if not legs:
            self._legs[node] = []
            self._starts[node] = []
        else:
            self.initial[node] = legs[0].current
            tail = legs[-1]
            hold = WaypointState(tail.target, tail.target, 1.0, math.inf, math.inf)
            self._legs[node] = list(legs) + [hold]
            self._starts[node] = [leg.leg_start for leg in self._legs[node]]
        self.static = False
        self._cache_t = None

    def position_at(self, node: int, t: float) -> Position:
        legs = self._legs[node]
        if not legs:
            return self.initial[node]
        while legs[-1].arrival <= t and legs[-1].leg_start != math.inf:
            # past the pre-drawn horizon
            legs.append(self._next_leg(legs[-1].target, legs[-1].arrival))
            self._starts[node].append(legs[-1].leg_start)
        i = bisect.bisect_right(self._starts[node], t) - 1
        if i < 0:
            return legs[0].current
        return legs[i].position_at(t)

    def positions_at(self, t: float) -> list[Position]:
        if t != self._cache_t:
            self._cache = [self.position_at(n, t) for n in range(self.node_count)]
            self._cache_t = t
        return self._cache

    def trajectory_digest(self, t_end: float | None = None) -> str:
        """SHA-256 over every node's legs that start before ``t_end``."""
        t_end = self.horizon if t_end is None else t_end
        h = hashlib.sha256()
        for node, p in enumerate(self.initial):
            h.update(struct.pack("<idd", node, p.x, p.y))
            for leg in self._legs[node]:
                if leg.leg_start - self.pause_time > t_end:
                    break
                h.update(struct.pack(
                    "<ddddd", leg.target.x, leg.target.y, leg.speed, leg.pause_until, leg.leg_start
                ))
        return h.hexdigest()
