"""Experiment orchestration: configs, runs, logs, sweeps and reports."""

from feedgame.harness.config import ConfigError, RunConfig, load_config
from feedgame.harness.files import FormatError, read_runlog, write_runlog
from feedgame.harness.outputs import analyze, save_run
from feedgame.harness.runner import Pipeline, RunLog, RunResult, replay, run
from feedgame.harness.sweep import Report, sweep

__all__ = [
    "ConfigError",
    "FormatError",
    "Pipeline",
    "Report",
    "RunConfig",
    "RunLog",
    "RunResult",
    "analyze",
    "load_config",
    "read_runlog",
    "replay",
    "run",
    "save_run",
    "sweep",
    "write_runlog",
]
