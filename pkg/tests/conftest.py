from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dgspec.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

WEIGHTS = st.sampled_from([0.0, 0.0, 0.0, 1.0, 2.0, 0.5, -1.0, -2.0, 3.0])


@st.composite
def signed_graphs(draw, min_n=1, max_n=7, loops=False):
    n = draw(st.integers(min_n, max_n))
    w = draw(arrays(np.float64, (n, n), elements=WEIGHTS))
    if not loops:
        np.fill_diagonal(w, 0.0)
    return Graph(w)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
