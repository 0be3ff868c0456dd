from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldgm_ldpc.degree_dist import DegreeDistribution
from ldgm_ldpc.density_evolution import (
    DEConfig,
    DEState,
    capacity_limit_stability,
    de_step,
    fixed_point_residual,
    perturbation_decay_rate,
    run_to_fixed_point,
    scalar_ldpc_threshold,
    stability_closed_form,
    stability_jacobian,
    threshold_search,
)
from ldgm_ldpc.errors import ConfigurationError, DegenerateLinearizationError

from .conftest import distributions, random_distribution

D = DegreeDistribution.from_mapping
R = DegreeDistribution.regular

# exact rational evaluation of one update, (3,6) in every layer, delta=0.4, p=0.3
TOY_STEP = (0.3813376, 0.30849176793756377, 0.35639730265785738, 0.953344, 0.96112, 0.83193)
# printed / derived closed forms for MIXED at delta=0.3, p=0.6 (sympy, exact rationals)
MIXED_PRINTED = 0.0037908
MIXED_DERIVED = 0.003740256
SCALAR_36_THRESHOLD = 0.42943981441949184


def cfg36(**kw):
    return DEConfig(R(3), R(6), R(3), R(6), **{"delta": 0.4, "p": 0.3, **kw})


MIXED = dict(
    lambda_G=D({1: 0.1, 3: 0.9}), rho_G=D({2: 0.5, 3: 0.5}),
    lambda_H=D({1: 0.1, 2: 0.3, 4: 0.6}), rho_H=D({5: 0.4, 7: 0.6}),
)


def test_zero_prior_kills_x():
    s = de_step(cfg36(delta=0.0, p=0.0), DEState(0.3, 0.7, 0.2, 0.1, 0.9, 0.5))
    assert s.x2 == 0.0 and s.x3 == 0.0


def test_full_erasure_is_fixed():
    cfg = DEConfig(**MIXED, delta=1.0, p=1.0)
    assert de_step(cfg, DEState.ones()) == DEState.ones()


def test_toy_step_matches_exact_evaluation():
    s = de_step(cfg36(), DEState(0.5, 0.4, 0.3, 0.0, 0.0, 0.0))
    assert s == pytest.approx(TOY_STEP, abs=1e-15)


def test_channel_rule_x1():
    s = de_step(cfg36(x1_rule="channel"), DEState(0.5, 0.4, 0.3, 0, 0, 0))
    assert s.x1 == 0.4


def test_config_validation():
    with pytest.raises(ConfigurationError):
        cfg36(delta=1.5)
    with pytest.raises(ConfigurationError):
        cfg36(tol=0.0)
    with pytest.raises(ConfigurationError):
        cfg36(x1_rule="other")


def test_zero_delta_converges_to_zero():
    res = run_to_fixed_point(cfg36(delta=0.0, p=0.5))
    assert res.converged and res.is_zero


def test_total_erasure_fixed_point_positive():
    assert run_to_fixed_point(cfg36(delta=1.0, p=0.0)).state.x2 > 0


configs = st.builds(
    lambda a, b, c, d, delta, p, rule: DEConfig(a, b, c, d, delta=delta, p=p, x1_rule=rule),
    distributions(), distributions(), distributions(), distributions(min_degree=2),
    st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.sampled_from(["printed", "channel"]),
)


@given(configs)
def test_fixed_point_properties(cfg):
    res = run_to_fixed_point(cfg, record=True)
    assert res.monotone
    arr = np.array(res.trajectory)
    assert np.all((arr >= 0) & (arr <= 1))
    if res.converged:
        assert fixed_point_residual(cfg, res.state) < 10 * cfg.tol


def test_scalar_threshold_oracle():
    assert scalar_ldpc_threshold(R(3), R(6)) == pytest.approx(SCALAR_36_THRESHOLD, abs=1e-6)


def test_threshold_decreases_with_puncturing():
    base = DEConfig(R(2), R(2), R(3), R(6), delta=0.0, x1_rule="channel")
    ts = [threshold_search(replace(base, p=p), precision=1e-4) for p in (0.0, 0.25, 0.5, 0.75, 1.0)]
    assert all(a >= b - 1e-4 for a, b in zip(ts, ts[1:]))
    assert ts[-1] == 0.0  # nothing gets DE started with every X2 bit punctured


def test_threshold_positive_at_full_puncturing_with_degree_one_checks():
    cfg = DEConfig(D({1: 0.3, 3: 0.7}), D({1: 0.5, 2: 0.5}), D({2: 0.2, 3: 0.8}), R(6),
                   delta=0.0, p=1.0, x1_rule="channel")
    t = threshold_search(cfg, precision=1e-4)
    assert t > 0.3
    below = replace(cfg, delta=0.5 * t)
    assert stability_jacobian(below)[1]
    assert run_to_fixed_point(below).is_zero


def test_threshold_parallel_matches_serial():
    cfg = cfg36(delta=0.0, p=0.2)
    assert threshold_search(cfg, precision=1e-4, jobs=2) == threshold_search(cfg, precision=1e-4)


def test_closed_form_trivial_cases():
    cfg = cfg36()
    assert stability_closed_form(cfg) == (0.0, True)
    assert stability_closed_form(DEConfig(**MIXED, delta=0.0, p=0.0)) == (0.0, True)


def test_closed_form_matches_symbolic_oracle():
    cfg = DEConfig(**MIXED, delta=0.3, p=0.6)
    assert stability_closed_form(cfg)[0] == pytest.approx(MIXED_PRINTED, rel=1e-12)
    assert stability_closed_form(cfg, "derived")[0] == pytest.approx(MIXED_DERIVED, rel=1e-12)


def test_capacity_limit_relations():
    cfg = DEConfig(**MIXED, delta=1.0, p=1.0)
    assert capacity_limit_stability(cfg) == stability_closed_form(cfg)
    cfg = DEConfig(**MIXED, delta=0.3, p=0.6)
    value, _ = capacity_limit_stability(cfg)
    assert value == pytest.approx(stability_closed_form(cfg)[0] / cfg.prior**2, rel=1e-12)
    assert capacity_limit_stability(DEConfig(R(2), R(2), **{k: MIXED[k] for k in ("lambda_H", "rho_H")},
                                             delta=0.5))[1]


def test_jacobian_trivial_cases():
    assert stability_jacobian(DEConfig(**MIXED, delta=0.0, p=0.0))[0] == pytest.approx(0.0, abs=1e-9)
    assert stability_jacobian(cfg36())[0] == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("rule", ["printed", "channel"])
def test_derived_closed_form_equals_jacobian(rule):
    rng = np.random.default_rng(77)
    for _ in range(40):
        cfg = DEConfig(random_distribution(rng, True), random_distribution(rng, False),
                       random_distribution(rng, True), random_distribution(rng, False),
                       delta=float(rng.uniform()), p=float(rng.uniform()), x1_rule=rule)
        try:
            exact = stability_closed_form(cfg, "derived")[0]
        except DegenerateLinearizationError:
            continue
        assert stability_jacobian(cfg)[0] == pytest.approx(exact, rel=1e-5, abs=1e-8)


def test_printed_matches_derived_for_equal_block_lengths():
    # L_G'(1) = R_G'(1) exactly when the LDGM layer has as many X1 as X2 bits
    cfg = DEConfig(D({1: 0.2, 3: 0.8}), D({2: 0.8, 3: 0.2}), D({1: 0.1, 3: 0.9}), R(6), delta=0.3, p=0.4)
    assert stability_closed_form(cfg)[0] == pytest.approx(stability_closed_form(cfg, "derived")[0], rel=1e-12)


def test_jacobian_agrees_with_perturbation_convergence():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 50:
        cfg = DEConfig(random_distribution(rng, True), random_distribution(rng, False),
                       random_distribution(rng, True), random_distribution(rng, False),
                       delta=float(rng.uniform()), p=float(rng.uniform()))
        crit, stable = stability_jacobian(cfg)
        if 0.9 <= crit <= 1.1:
            continue
        res = run_to_fixed_point(replace(cfg, max_iters=20_000), DEState.perturbation(1e-4, 1e-4))
        assert stable == res.is_zero
        checked += 1


def test_degenerate_linearization_reported():
    cfg = DEConfig(R(2), R(2), D({2: 0.2, 3: 0.8}), R(6), delta=1.0, p=0.0, x1_rule="channel")
    with pytest.raises(DegenerateLinearizationError):
        stability_closed_form(cfg, "derived")


def test_decay_rate_of_stable_config():
    cfg = DEConfig(**MIXED, delta=0.3, p=0.6)
    rate = perturbation_decay_rate(cfg)
    assert rate < 1.0
    assert perturbation_decay_rate(cfg36()) < 1.0
