import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldgm_ldpc import channel as chn
from ldgm_ldpc import gf2
from ldgm_ldpc.decoder import bit_erasure_rate, decode, peel
from ldgm_ldpc.degree_dist import DegreeDistribution
from ldgm_ldpc.ensemble import EnsembleParams, sample_codeword, sample_graph
from ldgm_ldpc.errors import DecoderIntegrityError
from ldgm_ldpc.gf2 import SparseBinMatrix

R = DegreeDistribution.regular


def small_graph(seed, n=24):
    ens = EnsembleParams(n, n, R(2), R(2), R(3), R(6))
    return sample_graph(ens, seed=seed)


@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_message_passing_matches_peeling(seed, delta):
    rng = np.random.default_rng(seed)
    g = small_graph(seed % 50)
    word = sample_codeword(g, rng)
    rx = chn.transmit(chn.bec(delta), word, None, rng)
    res = decode(g, rx)
    vals, known = peel(g.mother, rx)
    assert np.array_equal(res.known_mask, known)
    assert np.array_equal(res.resolved[known], word[known])
    assert np.array_equal(vals[known], word[known])


@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_feedback_does_not_change_resolved_set(seed, delta):
    rng = np.random.default_rng(seed)
    g = small_graph(seed % 50)
    rx = chn.transmit(chn.bec(delta), sample_codeword(g, rng), None, rng)
    a, b = decode(g, rx), decode(g, rx, x1_feedback=True)
    assert np.array_equal(a.known_mask, b.known_mask)


def test_no_erasures_checks_syndrome():
    g = small_graph(0)
    word = np.zeros(g.n, dtype=np.int8)
    res = decode(g, word)
    assert res.converged and res.iterations == 0
    word[0] = 1
    with pytest.raises(DecoderIntegrityError):
        decode(g, word)


def test_conflicting_evidence_detected():
    # x0 + x1 = 0 and x0 + x2 = 0 with x1=0, x2=1 observed: x0 gets two values
    m = SparseBinMatrix.from_rows([[0, 1], [0, 2]], 3)
    with pytest.raises(DecoderIntegrityError):
        decode(m, np.array([chn.ERASED, 0, 1]))


def test_all_erased_makes_no_progress():
    g = small_graph(1)
    res = decode(g, np.full(g.n, chn.ERASED), trace=True)
    assert not res.known_mask.any()
    assert res.iterations == 0
    assert bit_erasure_rate(res) == 1.0


def test_trace_columns_and_progress(rng):
    g = small_graph(2, n=400)
    rx = chn.transmit(chn.bec(0.3), np.zeros(g.n, dtype=np.uint8), None, rng)
    res = decode(g, rx, trace=True)
    assert res.trace.shape == (res.iterations, 6)
    assert np.all((0 <= res.trace) & (res.trace <= 1))
    # first iteration: variable messages carry only the channel
    assert res.trace[0, 0] == pytest.approx(np.mean(rx[:400] == chn.ERASED))
    assert res.converged
    assert bit_erasure_rate(res, "X1") == bit_erasure_rate(res, "X2") == 0.0


def test_plain_matrix_input():
    H = SparseBinMatrix.from_dense(np.array([[1, 1, 0, 1], [0, 1, 1, 1]], dtype=np.uint8))
    word = np.array([1, 0, 1, 1])
    assert not gf2.matvec(H, word).any()
    rx = np.array([chn.ERASED, 0, chn.ERASED, 1])
    res = decode(H, rx)
    assert res.converged and np.array_equal(res.resolved, word)


def test_bit_erasure_rate_blocks():
    g = small_graph(3)
    rx = np.zeros(g.n, dtype=np.int8)
    rx[: g.n1] = chn.ERASED
    rx[g.n1:] = 0
    res = decode(g, rx)
    assert bit_erasure_rate(res, "X1") == 0.0
    with pytest.raises(ValueError):
        bit_erasure_rate(res, "X3")
