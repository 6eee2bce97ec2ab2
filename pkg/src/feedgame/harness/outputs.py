"""Saving a run's artefacts and recomputing metrics from them."""

from __future__ import annotations

import json
from pathlib import Path

from feedgame.harness.config import dump_config
from feedgame.harness.files import (
    RUNLOG_FORMAT,
    SNAPSHOT_FORMAT,
    FormatError,
    format_metrics,
    read_runlog,
    read_snapshot,
    write_dynamics,
    write_metrics,
    write_runlog,
    write_snapshot,
    write_timelines,
)
from feedgame.harness.runner import RunResult, replay
from feedgame.metrics import (
    RunMetrics,
    arc_status_histogram,
    clustering_coefficient,
    motivation_subnets,
)
from feedgame.representation import RepresentationNetwork

RUNLOG_NAME = "runlog.jsonl"
SNAPSHOT_NAME = "snapshot.json"
METRICS_NAME = "metrics.json"


def save_run(result: RunResult, out: str | Path) -> Path:
    """Write config, log, final snapshot, metrics, dynamics and timelines into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.log.config
    # each artefact is written independently so a failure leaves the others intact
    (out / "config.txt").write_text(dump_config(cfg))
    write_runlog(out / RUNLOG_NAME, result.log)
    write_snapshot(out / SNAPSHOT_NAME, result.net, len(result.log), cfg)
    write_metrics(out / METRICS_NAME, result.metrics, cfg.policy_label)
    (out / "metrics.txt").write_text(format_metrics(result.metrics, f"focus {cfg.policy_label}, seed {cfg.seed}"))
    write_dynamics(out / "dynamics.tsv", result.pipeline.dynamics)
    write_timelines(out / "timelines.tsv", result.metrics)
    return out


def structural_metrics(net: RepresentationNetwork, iteration: int) -> RunMetrics:
    """Metrics available from a bare snapshot: no dynamics, one-point timelines."""
    coef = clustering_coefficient(net)
    return RunMetrics(
        iterations=iteration,
        node_count=len(net.nodes),
        arc_count=len(net.arcs),
        fact_count=net.fact_count,
        arc_histogram=arc_status_histogram(net),
        clustering=coef,
        clustering_timeline=[(iteration, coef)],
        facts_timeline=[(iteration, net.fact_count)],
        subnets=[(s.root, s.size, s.clustering) for s in motivation_subnets(net)],
    )


def _sniff(path: Path) -> str:
    with open(path) as fh:
        first = fh.readline()
    try:
        return json.loads(first).get("format", "")
    except (json.JSONDecodeError, AttributeError):
        pass
    try:
        return json.loads(path.read_text()).get("format", "")
    except (json.JSONDecodeError, AttributeError):
        raise FormatError(f"{path}: neither a run log nor a snapshot") from None


def analyze(path: str | Path) -> RunMetrics:
    """Recompute metrics offline from a run log (full) or a snapshot (structure only).

    A directory is taken to hold a saved run; its log is used.
    """
    path = Path(path)
    if path.is_dir():
        path = path / RUNLOG_NAME
    kind = _sniff(path)
    if kind == RUNLOG_FORMAT:
        return replay(read_runlog(path)).metrics()
    if kind == SNAPSHOT_FORMAT:
        net, iteration, _ = read_snapshot(path)
        return structural_metrics(net, iteration)
    raise FormatError(f"{path}: unknown format {kind!r}")
