"""antsim: simulator and verification harness for collaborative grid search
by anonymous finite-state agents."""

from .config import ConfigError, RunConfig, TreasureSpec
from .engine import (Controller, LocalInput, ProtocolError, RunResult,
                     UsageError, WorldState, init_world, run, step)
from .metrics import RunMetrics
from .rng import RngStream
from .runner import batch, pmf_test, run_experiment, scaling_report

__all__ = [
    "ConfigError", "Controller", "LocalInput", "ProtocolError", "RunConfig",
    "RunMetrics", "RunResult", "RngStream", "TreasureSpec", "UsageError",
    "WorldState", "batch", "init_world", "pmf_test", "run", "run_experiment",
    "scaling_report", "step",
]

__version__ = "0.1.0"
