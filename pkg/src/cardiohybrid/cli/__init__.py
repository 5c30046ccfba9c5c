"""Configuration-driven experiment runner and table emitters."""

from .config import ExperimentConfig, ModelEntry, load_config, parse_config
from .main import main
from .runner import ReportBundle, cost_profile, run_experiment
from .tables import emit_tables, fmt_mean_std

__all__ = [
    "ExperimentConfig",
    "ModelEntry",
    "ReportBundle",
    "cost_profile",
    "emit_tables",
    "fmt_mean_std",
    "load_config",
    "main",
    "parse_config",
    "run_experiment",
]
