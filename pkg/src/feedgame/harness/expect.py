"""Expectation files for ``compare --expect``.

One check per line, comparing the across-seed mean of a metric::

    # metric         policy  op  reference
    loop_fraction    0       ~   0.86 +- 0.08
    loop_fraction    *       >=  0.75
    att              var     <   @0
    fact_count       var     >=  1.25 * @0.75

``*`` applies the check to every policy in the report. A reference of
``@label`` is the same metric's mean under another policy, optionally scaled
by ``k *``. ``~`` asks for ``|mean - value| <= tol``.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from pathlib import Path

from feedgame.harness.sweep import Report

_OPS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


class ExpectationError(ValueError):
    pass


@dataclass
class Expectation:
    metric: str
    policy: str
    op: str
    value: float | None = None
    ref_policy: str | None = None
    scale: float = 1.0
    tolerance: float = 0.0
    line: int = 0
    text: str = ""


@dataclass
class Outcome:
    expectation: Expectation
    policy: str
    observed: float | None
    reference: float | None
    passed: bool

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        obs = "missing" if self.observed is None else f"{self.observed:.4f}"
        ref = "missing" if self.reference is None else f"{self.reference:.4f}"
        e = self.expectation
        tol = f" +- {e.tolerance:g}" if e.op == "~" else ""
        return f"{status}  {e.metric}[{self.policy}] = {obs}  {e.op} {ref}{tol}   ({e.text})"


def parse_expectations(text: str, source: str = "<expect>") -> list[Expectation]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 4:
            raise ExpectationError(f"{source}:{lineno}: expected 'metric policy op reference'")
        metric, policy, op, *rest = tokens
        if op != "~" and op not in _OPS:
            raise ExpectationError(f"{source}:{lineno}: unknown operator {op!r}")
        exp = Expectation(metric, policy, op, line=lineno, text=line)
        try:
            if op == "~":
                if len(rest) != 3 or rest[1] != "+-":
                    raise ValueError
                exp.value, exp.tolerance = float(rest[0]), float(rest[2])
            elif len(rest) == 1 and rest[0].startswith("@"):
                exp.ref_policy = rest[0][1:]
            elif len(rest) == 3 and rest[1] == "*" and rest[2].startswith("@"):
                exp.scale, exp.ref_policy = float(rest[0]), rest[2][1:]
            elif len(rest) == 1:
                exp.value = float(rest[0])
            else:
                raise ValueError
        except ValueError:
            raise ExpectationError(f"{source}:{lineno}: cannot parse reference {' '.join(rest)!r}") from None
        out.append(exp)
    return out


def load_expectations(path: str | Path) -> list[Expectation]:
    path = Path(path)
    return parse_expectations(path.read_text(), str(path))


def _mean(report: Report, policy: str, metric: str) -> float | None:
    s = report.summary(policy, metric)
    return None if s is None else s.mean


def check(report: Report, expectations: list[Expectation]) -> list[Outcome]:
    outcomes = []
    for e in expectations:
        policies = report.policies if e.policy == "*" else [e.policy]
        for p in policies:
            observed = _mean(report, p, e.metric)
            if e.ref_policy is not None:
                ref = _mean(report, e.ref_policy, e.metric)
                reference = None if ref is None else e.scale * ref
            else:
                reference = e.value
            if observed is None or reference is None:
                passed = False
            elif e.op == "~":
                passed = abs(observed - reference) <= e.tolerance
            else:
                passed = _OPS[e.op](observed, reference)
            outcomes.append(Outcome(e, p, observed, reference, passed))
    return outcomes
