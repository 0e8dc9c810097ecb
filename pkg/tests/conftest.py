import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from stablecut import oracle
from stablecut.core import reduce_to_core

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=600, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), "data")


@st.composite
def instances(draw, max_side=5):
    """Seeded random preference systems, small enough for the oracles."""
    if draw(st.booleans()):
        return oracle.near_cyclic_instance(draw(st.integers(2, max_side)), draw(st.integers(0, 10**6)))
    boys = draw(st.integers(1, max_side))
    girls = draw(st.integers(1, max_side))
    density = draw(st.sampled_from([0.4, 0.6, 0.8, 1.0]))
    seed = draw(st.integers(0, 10**6))
    return oracle.random_instance(boys, girls, density, seed)


@pytest.fixture
def i1():
    return reduce_to_core(oracle.fixture_i1())


@pytest.fixture
def i2():
    return reduce_to_core(oracle.fixture_i2())


@pytest.fixture
def i3():
    return reduce_to_core(oracle.fixture_i3())


@pytest.fixture
def data_dir():
    return DATA


# Acceptance lines are collected here and shown in the terminal summary, so
# they survive output capturing.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
