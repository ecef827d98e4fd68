import pytest

from lfsr_debruijn.construction import run_algorithm1
from lfsr_debruijn.diagram import build_diagram

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def d6():
    return build_diagram(6)


@pytest.fixture(scope="session")
def table1_run(d6):
    return run_algorithm1(d6, "table1-script")


@pytest.fixture
def record():
    """Collect one pass/fail line per acceptance criterion."""
    def _record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
