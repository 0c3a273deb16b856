import numpy as np
import pytest

from steinerpoly import build_rule, default_level

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def rules():
    """Default-level rules, built once per dimension."""
    cache = {}

    def get(n, level=None):
        key = (n, level or default_level(n))
        if key not in cache:
            cache[key] = build_rule(n, key[1])
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
