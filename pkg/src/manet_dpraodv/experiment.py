"""Single runs, parameter sweeps, CSV output and the built-in oracle scenarios."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import MODES, FlowSpec, ScenarioConfig
from .network import Network
from .traffic import MetricsReport

WORKERS_ENV = "MANET_DPRAODV_WORKERS"

AXES = {
    "network_size": "node_count",
    "traffic_load": "n_sources",
    "mobility": "max_speed_mps",
}

CSV_COLUMNS = ("axis_value", "seed", "mode", "pdr", "avg_delay_s", "nro", "sent", "delivered", "control_tx")


@dataclass(frozen=True)
class RunRecord:
    config_digest: str
    seed: int
    protocol_mode: str
    report: MetricsReport
    wall_clock_s: float
    axis_value: object = None
    trajectory_digest: str = ""


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    seeds: tuple[int, ...]
    modes: tuple[str, ...] = MODES

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {', '.join(AXES)}")
        if not self.values or not self.seeds:
            raise ValueError("a sweep needs at least one value and one seed")
        for m in self.modes:
            if m not in MODES:
                raise ValueError(f"unknown protocol mode {m!r}")


def run_experiment(cfg: ScenarioConfig, axis_value=None) -> RunRecord:
    t0 = time.perf_counter()
    net = Network(cfg)
    report = net.run()
    return RunRecord(
        config_digest=cfg.digest(),
        seed=cfg.master_seed,
        protocol_mode=cfg.protocol_mode,
        report=report,
        wall_clock_s=time.perf_counter() - t0,
        axis_value=axis_value,
        trajectory_digest=net.mobility.trajectory_digest(),
    )


def sweep_configs(spec: SweepSpec, base: ScenarioConfig) -> list[tuple[object, ScenarioConfig]]:
    key = AXES[spec.axis]
    out = []
    for value in spec.values:
        for seed in spec.seeds:
            for mode in spec.modes:
                cfg = base.with_overrides(**{key: value, "master_seed": seed, "protocol_mode": mode})
                out.append((value, cfg))
    return out


def _run_pair(item):
    value, cfg = item
    return run_experiment(cfg, value)


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, base: ScenarioConfig, workers: int | None = None) -> list[RunRecord]:
    """Run values x seeds x modes; records come back in that order."""
    jobs = sweep_configs(spec, base)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(jobs) == 1:
        return [_run_pair(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_pair, jobs))


def _cell(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def csv_text(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        rep = r.report
        w.writerow([_cell(r.axis_value if r.axis_value is not None else "NA"), r.seed, r.protocol_mode,
                     _cell(rep.pdr), _cell(rep.avg_delay), _cell(rep.nro),
                     rep.sent, rep.delivered, rep.control_tx])
    return buf.getvalue()


def emit_csv(records: list[RunRecord], path) -> None:
    if not records:
        raise ValueError("no records to write")
    text = csv_text(records)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror}") from exc


# built-in hand-checkable scenarios

def _far_corner_positions(n: int, taken: dict[int, tuple[float, float]],
                          spare: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    spare = iter(spare)
    return tuple(taken[i] if i in taken else next(spare) for i in range(n))


def chain_scenario(hops: int = 4, packets: int = 40, mode: str = "aodv", spacing: float = 200.0,
                   **overrides) -> ScenarioConfig:
    """Static line of ``hops + 1`` nodes, one flow from end to end."""
    n = hops + 1
    interval = 0.25
    start = 1.0
    cfg = ScenarioConfig(
        node_count=n,
        sim_time_s=start + packets * interval + 5.0,
        protocol_mode=mode,
        terrain_width_m=max(800.0, spacing * hops),
        positions=tuple((spacing * i, 400.0) for i in range(n)),
        malicious_nodes=(),
        flows=(FlowSpec(0, hops, start, start + packets * interval, interval),),
    )
    return cfg.with_overrides(**overrides)


# node ids follow the reference experiment: source 2, destination 7, blackhole 0
BLACKHOLE_LAYOUT = {
    2: (100.0, 400.0),   # source
    3: (300.0, 400.0),
    4: (500.0, 400.0),
    7: (700.0, 400.0),   # destination
    0: (100.0, 620.0),   # blackhole, adjacent to the source only
}
_SPARE = [(50.0, 50.0), (750.0, 50.0), (400.0, 780.0)]


def blackhole_scenario(mode: str = "aodv_attacked", packets: int = 40, **overrides) -> ScenarioConfig:
    """Source 2 reaches destination 7 over three hops; blackhole 0 sits next to the source.

    The forged reply reaches the source after two hop latencies, the genuine
    one after six.
    """
    interval = 0.25
    start = 1.0
    cfg = ScenarioConfig(
        node_count=8,
        sim_time_s=start + packets * interval + 5.0,
        protocol_mode=mode,
        positions=_far_corner_positions(8, BLACKHOLE_LAYOUT, _SPARE),
        malicious_nodes=(0,),
        flows=(FlowSpec(2, 7, start, start + packets * interval, interval),),
    )
    return cfg.with_overrides(**overrides)


def pair_scenario(distance: float = 100.0, packets: int = 10, mode: str = "aodv", **overrides) -> ScenarioConfig:
    """Two static nodes and a single flow between them."""
    interval = 0.25
    start = 1.0
    cfg = ScenarioConfig(
        node_count=2,
        sim_time_s=start + packets * interval + 5.0,
        protocol_mode=mode,
        positions=((100.0, 400.0), (100.0 + distance, 400.0)),
        malicious_nodes=(),
        flows=(FlowSpec(0, 1, start, start + packets * interval, interval),),
    )
    return cfg.with_overrides(**overrides)


ORACLES = {
    "chain": chain_scenario,
    "blackhole": blackhole_scenario,
    "pair": pair_scenario,
    "disconnected": lambda mode="aodv", **kw: pair_scenario(distance=500.0, mode=mode, **kw),
}


def desk_scale(**overrides) -> ScenarioConfig:
    """Reduced reference scenario used for the trend comparisons."""
    base = ScenarioConfig(node_count=30, terrain_width_m=600.0, terrain_height_m=600.0, sim_time_s=300.0)
    return base.with_overrides(**overrides) if overrides else base
