"""Discrete-event AODV simulator with a blackhole adversary and DPRAODV detection."""

from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .experiment import RunRecord, SweepSpec, emit_csv, run_experiment, run_sweep
from .network import Network
from .traffic import MetricsReport

__all__ = [
    "ConfigError",
    "MetricsReport",
    "Network",
    "RunRecord",
    "ScenarioConfig",
    "SweepSpec",
    "emit_csv",
    "load_config",
    "parse_config",
    "run_experiment",
    "run_sweep",
]

__version__ = "0.1.0"
