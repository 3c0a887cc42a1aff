import time
from contextlib import contextmanager

import pytest

# acceptance criteria record (number, title, passed, seconds, limit) here
ACCEPTANCE: list[tuple[int, str, bool, float, float]] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a criterion body; it passes when the body raises nothing and
    finishes within ``limit`` seconds."""
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        passed = ok and dt < limit
        ACCEPTANCE.append((number, title, passed, dt, limit))
        print(f"criterion {number} {title}: {'PASS' if passed else 'FAIL'} ({dt:.1f} s, limit {limit:.0f} s)")
    assert dt < limit, f"criterion {number} took {dt:.1f} s (limit {limit:.0f} s)"


@pytest.fixture
def accept():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, dt, limit in sorted(ACCEPTANCE):
        terminalreporter.write_line(
            f"criterion {number} {title}: {'PASS' if passed else 'FAIL'} ({dt:.1f} s, limit {limit:.0f} s)")
