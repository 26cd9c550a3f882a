from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from mtcalc import builtin
from mtcalc.double import build_double

BUILTINS = ("trivial", "fibonacci", "ising", "z3")

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines collected by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def cats():
    return {n: builtin(n) for n in BUILTINS}


@pytest.fixture(scope="session")
def doubles(cats):
    return {n: build_double(c) for n, c in cats.items()}


@pytest.fixture(scope="session")
def fib(cats):
    return cats["fibonacci"]


@pytest.fixture(scope="session")
def ising(cats):
    return cats["ising"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
