import time

import pytest

CRITERIA_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[CRITERIA_KEY] = []


class Criterion:
    """Times one acceptance criterion and records its pass/fail line."""

    def __init__(self, rows, name):
        self.rows = rows
        self.name = name
        self.start = time.perf_counter()

    def finish(self, ok: bool, limit: float, detail: str = ""):
        seconds = time.perf_counter() - self.start
        passed = bool(ok) and seconds < limit
        self.rows.append((self.name, passed, f"{detail}; {seconds:.2f}s (limit {limit:g}s)"))
        return passed, seconds


@pytest.fixture
def criterion(request):
    name = request.node.get_closest_marker("criterion").args[0]
    return Criterion(request.config.stash[CRITERIA_KEY], name)


def pytest_terminal_summary(terminalreporter, config):
    rows = config.stash.get(CRITERIA_KEY, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(rows, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
