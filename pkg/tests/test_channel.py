import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldgm_ldpc import channel as chn
from ldgm_ldpc.errors import ConfigurationError

# mpmath quadrature at 30 digits, sigma = 1
BIAWGN1_CAPACITY = 0.48594415413293532
BIAWGN1_G1 = 0.55040049079332717
BIAWGN1_G3 = 0.34486558542473003


def test_bec_capacity_and_g():
    for d in np.linspace(0, 1, 11):
        dens = chn.llr_density(chn.bec(d))
        assert chn.capacity(chn.bec(d)) == pytest.approx(1 - d)
        for k in (1, 2, 7):
            assert chn.g_functional(dens, k) == pytest.approx(1 - d, abs=1e-15)


@given(st.floats(0.0, 0.5), st.integers(1, 6))
def test_bsc_g_closed_form(q, k):
    dens = chn.llr_density(chn.bsc(q))
    assert chn.g_functional(dens, k) == pytest.approx((1 - 2 * q) ** (2 * k), abs=1e-12)


def test_bsc_capacity():
    q = 0.11
    h = -q * math.log2(q) - (1 - q) * math.log2(1 - q)
    assert chn.capacity(chn.bsc(q)) == pytest.approx(1 - h, abs=1e-14)
    assert chn.capacity(chn.bsc(0.0)) == 1.0
    assert chn.capacity(chn.bsc(0.5)) == pytest.approx(0.0, abs=1e-15)


def test_biawgn_against_high_precision_oracle():
    ch = chn.biawgn(1.0)
    assert chn.capacity(ch) == pytest.approx(BIAWGN1_CAPACITY, abs=1e-9)
    dens = chn.llr_density(ch)
    assert dens.total_mass == pytest.approx(1.0, abs=1e-9)
    assert chn.g_functional(dens, 1) == pytest.approx(BIAWGN1_G1, abs=1e-9)
    assert chn.g_functional(dens, 3) == pytest.approx(BIAWGN1_G3, abs=1e-9)


def test_biawgn_against_monte_carlo():
    rng = np.random.default_rng(0)
    ch = chn.biawgn(0.8)
    llr = chn.transmit(ch, np.zeros(400_000, dtype=np.uint8), None, rng)
    se = 3 * np.std(np.tanh(llr / 2) ** 2) / math.sqrt(llr.size)
    assert chn.g_functional(chn.llr_density(ch), 1) == pytest.approx(np.mean(np.tanh(llr / 2) ** 2), abs=se + 1e-3)
    cap_mc = 1 - np.mean(np.logaddexp(0, -llr)) / math.log(2)
    assert chn.capacity(ch) == pytest.approx(cap_mc, abs=5e-3)


def test_gaussian_density_symmetry():
    dens = chn.llr_density(chn.biawgn(1.3))
    n = dens.grid_loc.size // 2
    neg, pos = dens.grid_mass[:n][::-1], dens.grid_mass[n:]
    l = dens.grid_loc[n:]
    keep = pos > 1e-200
    assert np.allclose(neg[keep], pos[keep] * np.exp(-l[keep]), rtol=1e-9, atol=1e-300)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(1, 4))
def test_puncturing_scales_g(delta, p, k):
    for ch in (chn.bec(delta), chn.bsc(delta / 2)):
        base = chn.llr_density(ch)
        punct = chn.puncture_density(base, p)
        assert chn.g_functional(punct, k) == pytest.approx((1 - p) * chn.g_functional(base, k), abs=1e-12)
        assert punct.total_mass == pytest.approx(1.0)


def test_g_functional_rejects_bad_order():
    dens = chn.llr_density(chn.bec(0.5))
    with pytest.raises(ValueError):
        chn.g_functional(dens, 0)
    with pytest.raises(ValueError):
        chn.g_functional(dens, 1.5)


def test_channel_validation():
    with pytest.raises(ConfigurationError):
        chn.bec(1.2)
    with pytest.raises(ConfigurationError):
        chn.bsc(0.7)
    with pytest.raises(ConfigurationError):
        chn.biawgn(0.0)
    with pytest.raises(ConfigurationError):
        chn.ChannelModel("awgn", 1.0)


def test_transmit_bec_erases_punctured(rng):
    word = rng.integers(0, 2, 10_000).astype(np.uint8)
    mask = np.zeros(10_000, dtype=bool)
    mask[5000:] = True
    out = chn.transmit(chn.bec(0.2), word, mask, rng)
    assert (out[5000:] == chn.ERASED).all()
    seen = out[:5000] != chn.ERASED
    assert np.array_equal(out[:5000][seen], word[:5000][seen])
    assert (~seen).mean() == pytest.approx(0.2, abs=0.03)


def test_transmit_llr_channels(rng):
    word = np.zeros(1000, dtype=np.uint8)
    word[::2] = 1
    mask = np.zeros(1000, dtype=bool)
    mask[:10] = True
    llr = chn.transmit(chn.bsc(0.0), word, mask, rng)
    assert (llr[:10] == 0).all()
    assert np.all(np.sign(llr[10:]) == 1 - 2 * word[10:].astype(float))
    llr = chn.transmit(chn.biawgn(0.5), word, None, rng)
    signed = llr * (1 - 2 * word.astype(float))
    assert signed.mean() == pytest.approx(8.0, rel=0.05)


def test_density_csv():
    text = chn.write_density_csv(chn.llr_density(chn.bec(0.25)))
    assert text.splitlines() == ["location,mass", "0,0.25", "inf,0.75"]
