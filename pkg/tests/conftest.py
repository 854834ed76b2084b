import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


class Criterion:
    def __init__(self):
        self.failed: list[str] = []
        self.count = 0

    def __call__(self, what: str, ok) -> None:
        self.count += 1
        if not ok:
            self.failed.append(what)


@pytest.fixture
def criterion(request):
    """Context manager that checks one acceptance criterion and reports a PASS/FAIL line."""
    lines = request.config.stash[_LINES]

    @contextmanager
    def run(num: int, title: str, limit: float | None = None):
        c = Criterion()
        start = time.perf_counter()
        err = None
        try:
            yield c
        except Exception as e:  # reported, then re-raised below
            err = e
        took = time.perf_counter() - start
        if limit is not None and took > limit:
            c.failed.append(f"took {took:.2f}s > {limit:g}s")
        if err is not None:
            c.failed.append(f"{type(err).__name__}: {err}")
        status = "FAIL" if c.failed else "PASS"
        line = f"[{status}] criterion {num}: {title} ({c.count} checks, {took:.2f}s)"
        if c.failed:
            line += " failed: " + "; ".join(c.failed[:5])
        print(line)
        lines.append(line)
        if err is not None:
            raise err
        assert not c.failed, line

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
