"""Command line: ``run``, ``sweep`` and ``oracle`` subcommands."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import MODES, ConfigError, ScenarioConfig, load_config
from .engine import SchedulingError
from .experiment import AXES, ORACLES, SweepSpec, csv_text, emit_csv, run_experiment, run_sweep


def _number_list(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        v = float(part)
        out.append(int(v) if v.is_integer() and "." not in part else v)
    return tuple(out)


def _base_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "mode", None) is not None:
        overrides["protocol_mode"] = args.mode
    return cfg.with_overrides(**overrides) if overrides else cfg


def _print_record(rec, out=None):
    out = out or sys.stdout
    rep = rec.report
    delay = "NA" if rep.avg_delay is None else f"{rep.avg_delay:.6f}"
    nro = "NA" if rep.nro is None else f"{rep.nro:.4f}"
    print(f"mode={rec.protocol_mode} seed={rec.seed} pdr={rep.pdr:.4f} avg_delay_s={delay} nro={nro} "
          f"sent={rep.sent} delivered={rep.delivered} control_tx={rep.control_tx} "
          f"alarm_tx={rep.alarm_tx} wall={rec.wall_clock_s:.2f}s", file=out)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)


def cmd_run(args) -> int:
    rec = run_experiment(_base_config(args))
    _print_record(rec)
    if args.out:
        emit_csv([rec], args.out)
    return 0


def cmd_sweep(args) -> int:
    base = _base_config(args)
    modes = tuple(args.modes.split(",")) if args.modes else MODES
    spec = SweepSpec(args.axis, _number_list(args.values), tuple(int(s) for s in _number_list(args.seeds)), modes)
    records = run_sweep(spec, base, workers=args.workers)
    if args.out:
        emit_csv(records, args.out)
    else:
        sys.stdout.write(csv_text(records))
    return 0


def cmd_oracle(args) -> int:
    factory = ORACLES[args.name]
    cfg = factory(mode=args.mode) if args.mode else factory()
    if args.seed is not None:
        cfg = cfg.with_overrides(master_seed=args.seed)
    rec = run_experiment(cfg)
    _print_record(rec)
    if args.out:
        emit_csv([rec], args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="manet-dpraodv",
                                description="AODV / blackhole / DPRAODV discrete-event simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--config", help="scenario file (key = value)")
    run.add_argument("--seed", type=int)
    run.add_argument("--mode", choices=MODES)
    run.add_argument("--out", help="write a one-row CSV here")
    run.set_defaults(func=cmd_run)

    sw = sub.add_parser("sweep", help="sweep one axis over seeds and protocol modes")
    sw.add_argument("--config")
    sw.add_argument("--axis", required=True, choices=sorted(AXES))
    sw.add_argument("--values", required=True, help="comma-separated axis values")
    sw.add_argument("--seeds", default="1", help="comma-separated master seeds")
    sw.add_argument("--modes", help=f"comma-separated subset of {','.join(MODES)}")
    sw.add_argument("--workers", type=int, help="parallel runs (default: $MANET_DPRAODV_WORKERS or CPU count)")
    sw.add_argument("--out", help="CSV path (default: stdout)")
    sw.set_defaults(func=cmd_sweep)

    orc = sub.add_parser("oracle", help="run a built-in hand-checkable scenario")
    orc.add_argument("name", choices=sorted(ORACLES))
    orc.add_argument("--mode", choices=MODES)
    orc.add_argument("--seed", type=int)
    orc.add_argument("--out")
    orc.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SchedulingError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
