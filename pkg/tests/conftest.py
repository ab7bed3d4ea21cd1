import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fdlab import measures

settings.register_profile(
    "lab", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lab")


@st.composite
def dyadic_measures(draw, min_depth=0, max_depth=8, sparse=False):
    depth = draw(st.integers(min_depth, max_depth))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    w = rng.random(1 << depth)
    if sparse:
        w *= rng.random(1 << depth) < 0.2
    if not w.any():
        w[0] = 1.0
    return measures.DyadicMeasure(depth, w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one verdict line per acceptance criterion."""

    def record(name, status, detail):
        line = f"{status:<12} {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(f"ACCEPTANCE {line}")
        return status

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
