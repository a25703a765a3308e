"""Shared fixtures and the acceptance-criteria report hook."""

import pytest

from sumradii import validate_instance

# Five points on a line: two tight triples-ish groups, the classic
# hand-checkable example used throughout the module tests.
LINE5_COORDS = [0, 1, 2, 10, 11]

ACCEPTANCE_LINES: list = []


def line_instance(coords, k):
    dist = [[abs(a - b) for b in coords] for a in coords]
    return validate_instance(dist, k)


@pytest.fixture(scope="session")
def line5():
    return line_instance(LINE5_COORDS, 2)


def record_criterion(num: int, name: str, ok: bool, detail: str = ""):
    """One pass/fail line per acceptance criterion, printed in the run
    summary regardless of capture settings."""
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_LINES.append((num, f"criterion {num:02d} {name}: {status}{suffix}"))
    assert ok, f"criterion {num:02d} {name} failed: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
