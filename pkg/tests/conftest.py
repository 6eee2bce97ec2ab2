import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from feedgame.harness import RunConfig, sweep  # noqa: E402
from feedgame.harness.sweep import STANDARD_FOCUS  # noqa: E402

SWEEP_SEEDS = list(range(10))
SWEEP_ITERATIONS = 15000


def pytest_configure(config):
    config._criteria_lines = []


@pytest.fixture(scope="session")
def standard_sweep():
    """All five focus policies x 10 seeds x 15000 iterations at default settings."""
    jobs = max(1, min(len(STANDARD_FOCUS) * len(SWEEP_SEEDS), os.cpu_count() or 1))
    return sweep(RunConfig(iterations=SWEEP_ITERATIONS), list(STANDARD_FOCUS), SWEEP_SEEDS, jobs=jobs)


@pytest.fixture
def report_criterion(request):
    """Record a one-line verdict for the end-of-session criteria summary."""

    def report(number: int, title: str, passed: bool, detail: str) -> None:
        line = f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        request.config._criteria_lines.append((number, line))
        print(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criteria_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines, key=lambda x: x[0]):
        terminalreporter.write_line(line)
