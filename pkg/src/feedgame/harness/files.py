"""On-disk formats. Every file starts with a ``format``/``version`` header.

- run log: JSON lines; a header line, then one record per iteration with
  bit vectors hex-encoded
- network snapshot: one JSON document
- metrics: JSON document plus a human-readable text rendering
- dynamics: tab-separated ``from_code to_code count relative_frequency``
"""

from __future__ import annotations

import json
from pathlib import Path

from feedgame.closure import ClosureCode, DynamicsNetwork
from feedgame.gridworld import Actuation
from feedgame.harness.config import ConfigError, RunConfig
from feedgame.harness.runner import IterationRecord, RunLog
from feedgame.metrics import RunMetrics
from feedgame.representation import Event, RepresentationNetwork

FORMAT_VERSION = 1
RUNLOG_FORMAT = "feedgame.runlog"
SNAPSHOT_FORMAT = "feedgame.snapshot"
METRICS_FORMAT = "feedgame.metrics"
DYNAMICS_HEADER = f"# feedgame.dynamics version {FORMAT_VERSION}"

RECORD_FIELDS = (
    "iteration",
    "actuation",
    "effective",
    "chose_undo",
    "sensing",
    "motivation",
    "code",
    "focus",
    "game_completed",
    "events",
)


class FormatError(ValueError):
    pass


def _hex(value: int, bits: int) -> str:
    return f"{value:0{(bits + 3) // 4}x}"


def _header(kind: str, **extra) -> dict:
    return {"format": kind, "version": FORMAT_VERSION, **extra}


def _check_header(d: dict, kind: str, where: str) -> None:
    if not isinstance(d, dict) or d.get("format") != kind:
        found = d.get("format") if isinstance(d, dict) else None
        raise FormatError(f"{where}: expected format {kind!r}, found {found!r}")
    if d.get("version") != FORMAT_VERSION:
        raise FormatError(f"{where}: unsupported {kind} version {d.get('version')!r} (expected {FORMAT_VERSION})")


# -- run log ---------------------------------------------------------------


def encode_record(rec: IterationRecord, bits: int) -> str:
    d = {
        "iteration": rec.iteration,
        "actuation": list(rec.actuation),
        "effective": list(rec.effective),
        "chose_undo": rec.chose_undo,
        "sensing": _hex(rec.sensing, bits),
        "motivation": _hex(rec.motivation, 5),
        "code": str(rec.code),
        "focus": rec.focus,
        "game_completed": rec.game_completed,
        "events": [[e.kind, e.rule, list(e.subject) if isinstance(e.subject, tuple) else e.subject] for e in rec.events],
    }
    return json.dumps(d, separators=(",", ":"))


def write_runlog(path: str | Path, log: RunLog) -> None:
    bits = log.config.geometry.sensing_bits
    header = _header(
        RUNLOG_FORMAT,
        config=log.config.to_dict(),
        sensing_bits=bits,
        initial_sensing=_hex(log.initial_sensing, bits),
        records=len(log.records),
    )
    with open(path, "w") as fh:
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for rec in log.records:
            fh.write(encode_record(rec, bits) + "\n")


def _actuation(value, field_name: str) -> Actuation:
    if not isinstance(value, list) or len(value) != 4 or any(v not in (-1, 0, 1) for v in value):
        raise ValueError(f"field {field_name!r} must be four values in -1, 0, 1")
    return Actuation(*value)


def _decode_event(iteration: int, raw) -> Event:
    kind, rule, subject = raw
    if isinstance(subject, list):
        subject = tuple(subject)
    return Event(iteration, kind, rule, subject)


def decode_record(line: str, expected_iteration: int) -> IterationRecord:
    d = json.loads(line)
    if not isinstance(d, dict):
        raise ValueError("record is not a JSON object")
    missing = [f for f in RECORD_FIELDS if f not in d]
    if missing:
        raise ValueError(f"missing field(s) {', '.join(missing)}")
    t = d["iteration"]
    if t != expected_iteration:
        raise ValueError(f"field 'iteration' is {t!r}, expected {expected_iteration}")
    try:
        code = ClosureCode.parse(d["code"])
    except ValueError as exc:
        raise ValueError(f"field 'code': {exc}") from None
    for name in ("chose_undo", "game_completed"):
        if not isinstance(d[name], bool):
            raise ValueError(f"field {name!r} must be a boolean")
    try:
        sensing = int(d["sensing"], 16)
        motivation = int(d["motivation"], 16)
    except (TypeError, ValueError):
        raise ValueError("fields 'sensing' and 'motivation' must be hex strings") from None
    try:
        events = tuple(_decode_event(t, e) for e in d["events"])
    except (TypeError, ValueError):
        raise ValueError("field 'events' must be a list of [kind, rule, subject]") from None
    return IterationRecord(
        t,
        _actuation(d["actuation"], "actuation"),
        _actuation(d["effective"], "effective"),
        d["chose_undo"],
        sensing,
        motivation,
        code,
        float(d["focus"]),
        d["game_completed"],
        events,
    )


def read_runlog(path: str | Path) -> RunLog:
    path = Path(path)
    with open(path) as fh:
        first = fh.readline()
        try:
            header = json.loads(first)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:1: header is not valid JSON ({exc.msg})") from None
        _check_header(header, RUNLOG_FORMAT, f"{path}:1")
        try:
            config = RunConfig.from_dict(header["config"])
            initial = int(header["initial_sensing"], 16)
            expected = int(header["records"])
        except (KeyError, TypeError, ValueError, ConfigError) as exc:
            raise FormatError(f"{path}:1: bad header ({exc})") from None
        log = RunLog(config, initial)
        for lineno, line in enumerate(fh, 2):
            record_no = lineno - 1
            try:
                log.records.append(decode_record(line, record_no))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                msg = exc.msg if isinstance(exc, json.JSONDecodeError) else str(exc)
                raise FormatError(f"{path}:{lineno}: bad record {record_no}: {msg}") from None
    if len(log.records) != expected:
        raise FormatError(
            f"{path}:{len(log.records) + 2}: truncated log, record {len(log.records) + 1} missing "
            f"(header promises {expected} records)"
        )
    return log


# -- snapshots -------------------------------------------------------------


def snapshot_dict(net: RepresentationNetwork, iteration: int, config: RunConfig | None = None) -> dict:
    nodes, arcs = net.to_records()
    return _header(
        SNAPSHOT_FORMAT,
        iteration=iteration,
        config=None if config is None else config.to_dict(),
        nodes=nodes,
        arcs=arcs,
    )


def write_snapshot(path: str | Path, net: RepresentationNetwork, iteration: int, config: RunConfig | None = None) -> None:
    Path(path).write_text(json.dumps(snapshot_dict(net, iteration, config), indent=1) + "\n")


def read_snapshot(path: str | Path) -> tuple[RepresentationNetwork, int, RunConfig | None]:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}: snapshot is not valid JSON ({exc.msg})") from None
    _check_header(d, SNAPSHOT_FORMAT, str(path))
    try:
        config = None if d.get("config") is None else RunConfig.from_dict(d["config"])
        thresholds = config.thresholds if config else RepresentationNetwork().thresholds
        net = RepresentationNetwork.from_records(d["nodes"], d["arcs"], thresholds)
        return net, int(d["iteration"]), config
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad snapshot ({exc!r})") from None


# -- metrics ---------------------------------------------------------------


def write_metrics(path: str | Path, metrics: RunMetrics, label: str | None = None) -> None:
    d = _header(METRICS_FORMAT, label=label, metrics=metrics.to_dict())
    Path(path).write_text(json.dumps(d, indent=1) + "\n")


def read_metrics(path: str | Path) -> RunMetrics:
    path = Path(path)
    d = json.loads(path.read_text())
    _check_header(d, METRICS_FORMAT, str(path))
    return RunMetrics.from_dict(d["metrics"])


def format_metrics(metrics: RunMetrics, title: str = "run") -> str:
    lines = [f"== {title}: {metrics.iterations} iterations =="]
    lines.append(f"nodes {metrics.node_count}  arcs {metrics.arc_count}  facts {metrics.fact_count}")
    lines.append(f"clustering coefficient {metrics.clustering:.4f}")
    if metrics.loop_fraction is not None:
        att = "n/a" if metrics.att is None else f"{metrics.att:.3f}"
        lines.append(
            f"loops {metrics.loop_fraction:.4f}  transitions {metrics.transition_fraction:.4f}  ATT {att}"
        )
        lines.append("")
        lines.append("loops")
        for k, v in metrics.loop_table.items():
            lines.append(f"  {k}  {v:.4f}")
        lines.append("transitions")
        for k, v in list(metrics.transition_table.items())[:15]:
            lines.append(f"  {k}  {v:.4f}")
    lines.append("")
    lines.append("arc classes")
    for k, v in sorted(metrics.arc_histogram.items(), key=lambda kv: -kv[1]):
        lines.append(f"  {k}  {v}")
    lines.append(f"  num.arcs  {metrics.arc_count}")
    lines.append("")
    lines.append("motivation subnets (root, size, clustering)")
    for root, size, coef in metrics.subnets:
        lines.append(f"  {root}  {size}  {coef:.4f}")
    return "\n".join(lines) + "\n"


def write_dynamics(path: str | Path, dyn: DynamicsNetwork) -> None:
    lines = [DYNAMICS_HEADER, "from_code\tto_code\tcount\trelative_frequency"]
    for a, b, n, f in dyn.rows():
        lines.append(f"{a}\t{b}\t{n}\t{f!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_timelines(path: str | Path, metrics: RunMetrics) -> None:
    """Plot-ready series as tab-separated columns ``series iteration value``."""
    lines = [f"# feedgame.timelines version {FORMAT_VERSION}", "series\titeration\tvalue"]
    lines.extend(f"facts\t{t}\t{v}" for t, v in metrics.facts_timeline)
    lines.extend(f"clustering\t{t}\t{v!r}" for t, v in metrics.clustering_timeline)
    Path(path).write_text("\n".join(lines) + "\n")
