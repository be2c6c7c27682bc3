import time
from contextlib import contextmanager

import pytest

from fanohkr import families

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def dataset():
    return families.load_default()


@pytest.fixture
def criterion():
    """Times one acceptance criterion and records a PASS/FAIL line for the terminal summary."""

    @contextmanager
    def run(number, title, limit):
        start = time.perf_counter()
        status, note = "FAIL", ""
        try:
            yield
            elapsed = time.perf_counter() - start
            if elapsed < limit:
                status = "PASS"
            else:
                note = "  over the time limit"
        except BaseException as exc:
            note = f"  {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
            raise
        finally:
            elapsed = time.perf_counter() - start
            line = f"criterion {number} {status}  {title} ({elapsed:.2f} s, limit {limit:g} s){note}"
            ACCEPTANCE_LINES.append(line)
            print(line)
        assert elapsed < limit, f"criterion {number} took {elapsed:.2f} s"

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
