import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nivat2d.configuration import Periodic
from nivat2d.extension import convex_subsets
from nivat2d.geometry import ConvexLatticeSet, rectangle

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# filled by the acceptance module, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@st.composite
def periodic_configs(draw, max_w=4, max_h=4, max_symbols=3):
    w = draw(st.integers(1, max_w))
    h = draw(st.integers(1, max_h))
    k = draw(st.integers(1, max_symbols))
    cells = draw(st.lists(st.integers(0, k - 1), min_size=w * h, max_size=w * h))
    rows = tuple(tuple(cells[y * w:(y + 1) * w]) for y in range(h))
    return Periodic(tuple(str(i) for i in range(k)), rows)


_R63 = convex_subsets(rectangle(6, 3))


@st.composite
def convex_sets(draw, min_size=1):
    pool = [s for s in _R63 if len(s) >= min_size]
    return ConvexLatticeSet(draw(st.sampled_from(pool)))


lattice_points = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))
