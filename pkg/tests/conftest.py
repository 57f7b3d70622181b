import functools

import pytest

from stripemin import LocalTerm, SolverOptions, outer_minimize, single_exponential

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def cached_phase_point(lam: float, variant: str = "vee"):
    """Outer minimization on the exponential kernel, shared across test modules."""
    return outer_minimize(single_exponential(lam), LocalTerm(variant), options=SolverOptions())


@pytest.fixture
def vee():
    return LocalTerm("vee")


@pytest.fixture
def record_acceptance():
    def record(number, name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}"
                                + (f" -- {detail}" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
