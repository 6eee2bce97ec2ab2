"""Multi-policy, multi-seed sweeps and the comparison report."""

from __future__ import annotations

import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from feedgame.harness.config import RunConfig
from feedgame.harness.files import FORMAT_VERSION, FormatError
from feedgame.harness.outputs import save_run
from feedgame.harness.runner import run
from feedgame.metrics import RunMetrics

log = logging.getLogger(__name__)

REPORT_FORMAT = "feedgame.report"
STANDARD_FOCUS = ("0", "0.25", "0.5", "0.75", "var")


def policy_label(focus: str) -> str:
    return RunConfig(focus=str(focus), iterations=0).policy_label


@dataclass
class Summary:
    mean: float
    std: float
    n: int

    def to_list(self) -> list:
        return [self.mean, self.std, self.n]


def summarize(values: list[float]) -> Summary:
    n = len(values)
    mean = math.fsum(values) / n
    std = statistics.stdev(values) if n > 1 else 0.0
    return Summary(mean, std, n)


@dataclass
class Report:
    policies: list[str]
    seeds: list[int]
    iterations: int
    runs: dict[str, dict[int, dict[str, float]]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    def metric_names(self) -> list[str]:
        names = set()
        for per_seed in self.runs.values():
            for scalars in per_seed.values():
                names.update(scalars)
        return sorted(names)

    def values(self, policy: str, metric: str) -> list[float]:
        """Per-seed values; absent table cells and histogram classes count as 0."""
        out = []
        for seed in sorted(self.runs.get(policy, {})):
            scalars = self.runs[policy][seed]
            if metric in scalars:
                out.append(scalars[metric])
            elif metric.split(".", 1)[0] in ("loops", "transitions", "arcs"):
                out.append(0.0)
        return out

    def summary(self, policy: str, metric: str) -> Summary | None:
        vals = self.values(policy, metric)
        return summarize(vals) if vals else None

    def mean(self, policy: str, metric: str) -> float:
        s = self.summary(policy, metric)
        if s is None:
            raise KeyError(f"no values for {metric} under policy {policy}")
        return s.mean

    def to_dict(self) -> dict:
        summary = {
            p: {m: s.to_list() for m in self.metric_names() if (s := self.summary(p, m)) is not None}
            for p in self.policies
        }
        return {
            "format": REPORT_FORMAT,
            "version": FORMAT_VERSION,
            "policies": self.policies,
            "seeds": self.seeds,
            "iterations": self.iterations,
            "runs": {p: {str(s): v for s, v in per.items()} for p, per in self.runs.items()},
            "summary": summary,
            "failures": self.failures,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("format") != REPORT_FORMAT or d.get("version") != FORMAT_VERSION:
            raise FormatError(f"not a version-{FORMAT_VERSION} sweep report")
        rep = cls(list(d["policies"]), list(d["seeds"]), d["iterations"])
        rep.runs = {p: {int(s): v for s, v in per.items()} for p, per in d["runs"].items()}
        rep.failures = list(d.get("failures", []))
        return rep

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Report":
        path = Path(path)
        try:
            d = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{exc.lineno}: report is not valid JSON ({exc.msg})") from None
        return cls.from_dict(d)


def _run_one(config: RunConfig) -> tuple[str, int, RunMetrics]:
    result = run(config)
    if config.out:
        save_run(result, config.out)
    return config.policy_label, config.seed, result.metrics


def sweep(
    base: RunConfig,
    focus_values: list[str],
    seeds: list[int],
    jobs: int = 1,
    out: str | Path | None = None,
) -> Report:
    """Run every (focus, seed) pair; runs share nothing and may run in parallel."""
    if not focus_values or not seeds:
        raise ValueError("sweep needs at least one focus value and one seed")
    configs = []
    labels = []
    for focus in focus_values:
        label = policy_label(focus)
        if label not in labels:
            labels.append(label)
        for seed in seeds:
            run_out = None if out is None else str(Path(out) / f"focus-{label}" / f"seed-{seed}")
            configs.append(base.replace(focus=str(focus), seed=seed, out=run_out))

    report = Report(labels, list(seeds), base.iterations)
    results = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(cfg, pool.submit(_run_one, cfg)) for cfg in configs]
            for cfg, fut in futures:
                try:
                    results.append(fut.result())
                except Exception as exc:
                    report.failures.append({"policy": cfg.policy_label, "seed": cfg.seed, "error": repr(exc)})
    else:
        for cfg in configs:
            try:
                results.append(_run_one(cfg))
            except Exception as exc:
                log.exception("run focus=%s seed=%s failed", cfg.focus, cfg.seed)
                report.failures.append({"policy": cfg.policy_label, "seed": cfg.seed, "error": repr(exc)})

    for label, seed, metrics in results:
        report.runs.setdefault(label, {})[seed] = metrics.scalars()
    # keep a canonical order independent of completion order
    report.runs = {p: dict(sorted(report.runs.get(p, {}).items())) for p in labels if p in report.runs}
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        report.save(Path(out) / "report.json")
        (Path(out) / "report.txt").write_text(format_report(report))
    return report


def _cell(s: Summary | None) -> str:
    if s is None:
        return "-"
    if s.n > 1:
        return f"{s.mean:.3f}±{s.std:.3f}"
    return f"{s.mean:.3f}"


def _table(report: Report, title: str, rows: list[tuple[str, str]], width: int = 17) -> list[str]:
    head = f"{title:<16}" + "".join(f"{p:>{width}}" for p in report.policies)
    lines = [head]
    for label, metric in rows:
        lines.append(f"{label:<16}" + "".join(f"{_cell(report.summary(p, metric)):>{width}}" for p in report.policies))
    return lines


def _top_cells(report: Report, prefix: str, limit: int) -> list[str]:
    first = report.policies[0]
    names = [m for m in report.metric_names() if m.startswith(prefix + ".")]

    def key(m):
        s = report.summary(first, m)
        return -(s.mean if s else 0.0), m

    return sorted(names, key=key)[:limit]


def format_report(report: Report) -> str:
    """Tables laid out like loops / transitions / final arc classes, one column per policy."""
    n = len(report.seeds)
    lines = [f"sweep: {report.iterations} iterations, {n} seed(s) per policy (mean±std)", ""]
    loops = _top_cells(report, "loops", 10)
    lines += _table(report, "loops", [(m.split(".", 1)[1], m) for m in loops] + [("total", "loop_fraction")])
    lines.append("")
    trans = _top_cells(report, "transitions", 10)
    lines += _table(
        report, "transitions", [(m.split(".", 1)[1], m) for m in trans] + [("total", "transition_fraction")]
    )
    lines.append("")
    arcs = _top_cells(report, "arcs", 12)
    rows = [(("Facts: 223" if m == "arcs.223" else m.split(".", 1)[1]), m) for m in arcs]
    lines += _table(report, "arcs", rows + [("num.arcs", "arc_count")])
    lines.append("")
    lines += _table(
        report,
        "network",
        [("ATT", "att"), ("clustering", "clustering"), ("nodes", "node_count"), ("facts", "fact_count"),
         ("subnets>1", "nontrivial_subnets")],
    )
    if report.failures:
        lines.append("")
        lines.append("failed runs:")
        for f in report.failures:
            lines.append(f"  focus {f['policy']} seed {f['seed']}: {f['error']}")
    return "\n".join(lines) + "\n"
