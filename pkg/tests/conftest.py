import random

import pytest
from hypothesis import settings, strategies as st

from tmotif.ratfunc import function_field

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")


@pytest.fixture(params=[2, 3], ids=["F2", "F3"])
def K(request):
    return function_field(request.param)


@pytest.fixture
def rng():
    return random.Random(12345)


def polys(K, max_deg=3):
    """Hypothesis strategy for polynomials in theta of degree <= max_deg."""
    return st.lists(st.integers(0, K.p - 1), max_size=max_deg + 1).map(K.poly)


def rats(K, max_deg=2):
    """Quotients num/den with den monic of degree <= max_deg."""
    dens = st.lists(st.integers(0, K.p - 1), max_size=max_deg).map(lambda c: K.poly(c + [1]))
    return st.tuples(polys(K, max_deg), dens).map(lambda nd: nd[0] / nd[1])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
