import functools
import json
import os

import pytest

import jnbellman as jnb

FROZEN_PATH = os.path.join(os.path.dirname(__file__), "oracles", "frozen.json")


@functools.lru_cache(maxsize=None)
def frozen():
    with open(FROZEN_PATH) as fh:
        return json.load(fh)


@functools.lru_cache(maxsize=None)
def setup(p, factor):
    """``(params, tc)`` at ``C = factor * C_0(p)``."""
    return jnb.construct(p, factor * jnb.thresholds(p)[1])


@pytest.fixture(scope="session")
def oracle():
    return frozen()


@pytest.fixture(scope="session")
def p3():
    return setup(3.0, 2.0)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
