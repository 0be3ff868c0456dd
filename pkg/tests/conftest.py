import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ldgm_ldpc.degree_dist import DegreeDistribution

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def distributions(draw, max_degree: int = 8, min_degree: int = 1, perspective: str = "edge"):
    degs = draw(st.lists(st.integers(min_degree, max_degree), min_size=1, max_size=4, unique=True))
    w = draw(st.lists(st.floats(0.05, 1.0), min_size=len(degs), max_size=len(degs)))
    total = sum(w)
    return DegreeDistribution.from_mapping({d: x / total for d, x in zip(degs, w)}, perspective)


def random_distribution(rng: np.random.Generator, with_degree_one: bool, max_degree: int = 8):
    k = int(rng.integers(1, 4))
    degs = rng.choice(np.arange(2, max_degree + 1), size=k, replace=False)
    w = rng.dirichlet(np.ones(k + int(with_degree_one)))
    m = {int(d): float(x) for d, x in zip(degs, w)}
    if with_degree_one:
        m[1] = float(w[-1])
    return DegreeDistribution.from_mapping(m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
