import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from hodgemod.cli import random_targets
from hodgemod.poly import SymPoly

settings.register_profile("hodgemod", deadline=None)
settings.load_profile("hodgemod")

UIDS = ["node:0/a/h11", "node:0/a/h02", "node:1/b/h11", "node:2/mid/h12", "node:3/chi/h03"]


@st.composite
def polys(draw, max_terms=5, max_degree=3):
    """Random SymPoly over a small fixed pool of unknowns."""
    total = SymPoly.const(draw(st.integers(-20, 20)))
    for _ in range(draw(st.integers(0, max_terms))):
        mono = draw(st.lists(st.sampled_from(UIDS), max_size=max_degree))
        term = SymPoly.const(draw(st.integers(-50, 50)))
        for uid in mono:
            term = term * SymPoly.var(uid)
        total = total + term
    return total


assignments_values = st.fixed_dictionaries({uid: st.integers(0, 30) for uid in UIDS})


@pytest.fixture
def rng():
    return random.Random(12345)


def make_targets(n, m, seed):
    return random_targets(n, m, random.Random(seed))


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
