import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldgm_ldpc.degree_dist import (
    DegreeDistribution,
    average_degree,
    derivative_at,
    design_rate,
    edge_perspective,
    eval_poly,
    integral,
    node_perspective,
    parse_distribution,
)
from ldgm_ldpc.errors import ConfigurationError, DomainError

from .conftest import distributions


def test_regular_36_rate():
    lam, rho = DegreeDistribution.regular(3), DegreeDistribution.regular(6)
    assert design_rate(lam, rho) == pytest.approx(0.5, abs=1e-15)
    assert eval_poly(lam, 0.5) == pytest.approx(0.25)
    assert derivative_at(rho, 1.0) == pytest.approx(5.0)


def test_node_perspective_of_mixture():
    # lambda = 0.5x + 0.5x^2 -> node fractions proportional to 0.5/2, 0.5/3
    lam = DegreeDistribution.from_mapping({2: 0.5, 3: 0.5})
    L = node_perspective(lam)
    assert L.as_mapping() == pytest.approx({2: 0.6, 3: 0.4})
    assert average_degree(lam) == pytest.approx(2.4)
    assert average_degree(L) == pytest.approx(2.4)


def test_string_keys_and_renormalization():
    d = parse_distribution({"2": 0.5, "3": 0.5 + 1e-12})
    assert sum(d.coeffs) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ConfigurationError):
        DegreeDistribution.from_mapping({2: 0.5, 3: 0.4})


def test_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        DegreeDistribution.from_mapping({0: 1.0})
    with pytest.raises(ConfigurationError):
        DegreeDistribution.from_mapping({2: -0.5, 3: 1.5})
    with pytest.raises(DomainError):
        eval_poly(DegreeDistribution.regular(3), 1.5)


def test_negative_design_rate_rejected():
    with pytest.raises(ConfigurationError):
        design_rate(DegreeDistribution.regular(6), DegreeDistribution.regular(3))


@given(distributions())
def test_edge_node_round_trip(d):
    back = edge_perspective(node_perspective(d))
    assert back.coeffs == pytest.approx(d.coeffs, abs=1e-12)


@given(distributions(), st.floats(0.0, 1.0))
def test_polynomial_bounds_and_monotone(d, x):
    v = eval_poly(d, x)
    assert 0.0 <= v <= 1.0 + 1e-12
    assert eval_poly(d, 1.0) == pytest.approx(1.0)
    assert eval_poly(d, min(1.0, x + 0.1)) >= v - 1e-12


@given(distributions())
def test_integral_matches_average_degree(d):
    assert integral(d) == pytest.approx(1.0 / average_degree(d))
    # node-perspective derivative at 1 equals the average degree
    assert derivative_at(node_perspective(d), 1.0) == pytest.approx(average_degree(d))


@given(distributions(), st.floats(0.01, 0.99))
def test_derivative_matches_finite_difference(d, x):
    h = 1e-6
    fd = (eval_poly(d, min(1.0, x + h)) - eval_poly(d, max(0.0, x - h))) / (2 * h)
    assert derivative_at(d, x) == pytest.approx(fd, rel=1e-4, abs=1e-6)


def test_design_rate_regular_family():
    for dv, dc in [(2, 4), (3, 6), (4, 8), (3, 4)]:
        r = design_rate(DegreeDistribution.regular(dv), DegreeDistribution.regular(dc))
        assert math.isclose(r, 1 - dv / dc, abs_tol=1e-14)
