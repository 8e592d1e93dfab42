"""Scenario files: ``key = value`` lines with ``#`` comments (TOML syntax).

Every key is optional; omitted keys fall back to the reference scenario
(70 nodes in 800 x 800 m, 250 m range, 1000 s, 5 CBR sources, one blackhole,
random waypoint with 2 s pauses and 60 m/s top speed).
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

MODES = ("aodv", "aodv_attacked", "dpraodv")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class FlowSpec:
    src: int
    dst: int
    start: float | None = None
    stop: float | None = None
    interval: float | None = None
    packet_bytes: int | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    node_count: int = 70
    sim_time_s: float = 1000.0
    master_seed: int = 42
    protocol_mode: str = "aodv"
    # mobility
    terrain_width_m: float = 800.0
    terrain_height_m: float = 800.0
    pause_time_s: float = 2.0
    max_speed_mps: float = 60.0
    min_speed_mps: float = 1.0
    positions: tuple[tuple[float, float], ...] | None = None
    # radio
    tx_range_m: float = 250.0
    per_hop_latency_s: float = 0.002
    # aodv
    route_lifetime_s: float = 10.0
    discovery_timeout_s: float = 1.0
    discovery_retries: int = 2
    buffer_cap: int = 64
    # adversary
    malicious_nodes: tuple[int, ...] = (0,)
    seq_offset_lo: int = 15
    seq_offset_hi: int = 200
    reply_hop_count: int = 1
    # dpraodv
    initial_threshold: float = 10.0
    slot_length_s: float = 5.0
    alarm_scope: str = "flood"
    check_mode: str = "diff"
    # traffic
    flows: tuple[FlowSpec, ...] | None = None
    n_sources: int = 5
    cbr_interval_s: float = 0.25
    cbr_packet_bytes: int = 512

    @property
    def dpraodv_enabled(self) -> bool:
        return self.protocol_mode == "dpraodv"

    @property
    def attacked(self) -> bool:
        return self.protocol_mode != "aodv"

    def with_overrides(self, **kw) -> "ScenarioConfig":
        cfg = dataclasses.replace(self, **kw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def need(ok, key, msg):
            if not ok:
                raise ConfigError(key, msg)

        need(self.node_count >= 2, "node_count", "node_count ≥ 2 required")
        need(self.sim_time_s > 0, "sim_time_s", "must be positive")
        need(self.protocol_mode in MODES, "protocol_mode", f"must be one of {', '.join(MODES)}")
        need(self.terrain_width_m > 0, "terrain_width_m", "must be positive")
        need(self.terrain_height_m > 0, "terrain_height_m", "must be positive")
        need(self.pause_time_s >= 0, "pause_time_s", "must be non-negative")
        need(self.max_speed_mps >= 0, "max_speed_mps", "must be non-negative")
        need(self.min_speed_mps >= 0, "min_speed_mps", "must be non-negative")
        need(self.tx_range_m > 0, "tx_range_m", "must be positive")
        need(self.per_hop_latency_s > 0, "per_hop_latency_s", "must be positive")
        need(self.route_lifetime_s > 0, "route_lifetime_s", "must be positive")
        need(self.discovery_timeout_s > 0, "discovery_timeout_s", "must be positive")
        need(self.discovery_retries >= 0, "discovery_retries", "must be non-negative")
        need(self.buffer_cap >= 1, "buffer_cap", "must be at least 1")
        need(self.seq_offset_lo <= self.seq_offset_hi, "seq_offset_lo", "must not exceed seq_offset_hi")
        need(self.seq_offset_lo >= 0, "seq_offset_lo", "must be non-negative")
        need(self.reply_hop_count >= 0, "reply_hop_count", "must be non-negative")
        need(self.initial_threshold > 0, "initial_threshold", "must be positive")
        need(self.slot_length_s > 0, "slot_length_s", "must be positive")
        need(self.alarm_scope in ("flood", "neighbors"), "alarm_scope", "must be flood or neighbors")
        need(self.check_mode in ("diff", "absolute"), "check_mode", "must be diff or absolute")
        need(self.n_sources >= 0, "n_sources", "must be non-negative")
        need(self.cbr_interval_s > 0, "cbr_interval_s", "must be positive")
        need(self.cbr_packet_bytes > 0, "cbr_packet_bytes", "must be positive")
        for m in self.malicious_nodes:
            need(0 <= m < self.node_count, "malicious_nodes", f"node {m} outside 0..{self.node_count - 1}")
        if self.positions is not None:
            need(len(self.positions) == self.node_count, "positions", "need one [x, y] per node")
            for x, y in self.positions:
                need(0 <= x <= self.terrain_width_m and 0 <= y <= self.terrain_height_m,
                     "positions", f"({x}, {y}) lies outside the terrain")
        if self.flows is not None:
            bad = set(self.malicious_nodes)
            for f in self.flows:
                for end in (f.src, f.dst):
                    need(0 <= end < self.node_count, "flows", f"endpoint {end} is not a node")
                    need(end not in bad, "flows", f"endpoint {end} is a malicious node")
                need(f.interval is None or f.interval > 0, "flows", "interval must be positive")

    def canonical_text(self) -> str:
        lines = []
        for f in fields(self):
            lines.append(f"{f.name} = {getattr(self, f.name)!r}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


_FIELDS = {f.name: f for f in fields(ScenarioConfig)}
_INT_KEYS = {"node_count", "master_seed", "discovery_retries", "buffer_cap", "seq_offset_lo",
             "seq_offset_hi", "reply_hop_count", "n_sources", "cbr_packet_bytes"}
_STR_KEYS = {"protocol_mode", "alarm_scope", "check_mode"}
_FLOAT_KEYS = {k for k in _FIELDS if k not in _INT_KEYS | _STR_KEYS
               | {"positions", "malicious_nodes", "flows"}}


def _as_int(key, v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    return v


def _as_float(key, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    return float(v)


def _parse_flow(v) -> FlowSpec:
    if isinstance(v, dict):
        unknown = set(v) - {"src", "dst", "start", "stop", "interval", "bytes"}
        if unknown or "src" not in v or "dst" not in v:
            raise ConfigError("flows", f"bad flow table {v!r}")
        parts = [v["src"], v["dst"], v.get("start"), v.get("stop"), v.get("interval"), v.get("bytes")]
    elif isinstance(v, list) and 2 <= len(v) <= 6:
        parts = list(v) + [None] * (6 - len(v))
    else:
        raise ConfigError("flows", f"each flow is [src, dst, start?, stop?, interval?, bytes?], got {v!r}")
    src, dst = _as_int("flows", parts[0]), _as_int("flows", parts[1])
    start, stop, interval = (None if p is None else _as_float("flows", p) for p in parts[2:5])
    nbytes = None if parts[5] is None else _as_int("flows", parts[5])
    return FlowSpec(src, dst, start, stop, interval, nbytes)


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"malformed scenario file: {exc}") from None
    values = {}
    for key, v in doc.items():
        if key == "dpraodv_enabled":
            if not isinstance(v, bool):
                raise ConfigError(key, f"expected true or false, got {v!r}")
            continue
        if key not in _FIELDS:
            raise ConfigError(key, "unknown key")
        if key in _INT_KEYS:
            values[key] = _as_int(key, v)
        elif key in _FLOAT_KEYS:
            values[key] = _as_float(key, v)
        elif key in _STR_KEYS:
            if not isinstance(v, str):
                raise ConfigError(key, f"expected a string, got {v!r}")
            values[key] = v
        elif key == "malicious_nodes":
            items = v if isinstance(v, list) else [v]
            values[key] = tuple(_as_int(key, m) for m in items)
        elif key == "positions":
            if not isinstance(v, list) or not all(isinstance(p, list) and len(p) == 2 for p in v):
                raise ConfigError(key, "expected a list of [x, y] pairs")
            values[key] = tuple((_as_float(key, x), _as_float(key, y)) for x, y in v)
        elif key == "flows":
            if not isinstance(v, list):
                raise ConfigError(key, "expected a list of flows")
            values[key] = tuple(_parse_flow(f) for f in v)
    if "dpraodv_enabled" in doc:
        on = doc["dpraodv_enabled"]
        mode = values.get("protocol_mode")
        if on and mode not in (None, "dpraodv"):
            raise ConfigError("dpraodv_enabled", f"contradicts protocol_mode = {mode!r}")
        if not on and mode == "dpraodv":
            raise ConfigError("dpraodv_enabled", "false contradicts protocol_mode = 'dpraodv'")
        if on:
            values["protocol_mode"] = "dpraodv"
    cfg = dataclasses.replace(base or ScenarioConfig(), **values)
    cfg.validate()
    return cfg


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
