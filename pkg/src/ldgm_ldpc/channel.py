"""Binary-input symmetric-output memoryless channels and their LLR densities.

LLR convention: ``log p(y|0) / p(y|1)`` conditioned on a transmitted zero.
The perfectly reliable LLR is the sentinel ``INF_LLR`` and is only ever
handled through its analytic limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import ConfigurationError

INF_LLR = math.inf
ERASED = -1  # BEC output symbol for an erasure

QUAD_NODES = 2048
QUAD_SPAN_SD = 10.0

BEC, BSC, BIAWGN = "bec", "bsc", "biawgn"


@dataclass(frozen=True)
class ChannelModel:
    kind: str
    param: float

    def __post_init__(self) -> None:
        kind = str(self.kind).lower()
        object.__setattr__(self, "kind", kind)
        x = float(self.param)
        if kind == BEC and not 0.0 <= x <= 1.0:
            raise ConfigurationError(f"BEC erasure probability {x} outside [0, 1]")
        if kind == BSC and not 0.0 <= x <= 0.5:
            raise ConfigurationError(f"BSC crossover {x} outside [0, 0.5]")
        if kind == BIAWGN and not (x > 0 and math.isfinite(x)):
            raise ConfigurationError(f"BIAWGN noise sigma {x} must be positive")
        if kind not in (BEC, BSC, BIAWGN):
            raise ConfigurationError(f"unknown channel kind {self.kind!r}")


def bec(delta: float) -> ChannelModel:
    return ChannelModel(BEC, delta)


def bsc(q: float) -> ChannelModel:
    return ChannelModel(BSC, q)


def biawgn(sigma: float) -> ChannelModel:
    return ChannelModel(BIAWGN, sigma)


@dataclass(frozen=True, eq=False)
class LlrDensity:
    """Point masses plus a symmetric quadrature grid for the continuous part.

    ``grid_loc`` holds Gauss-Legendre nodes mirrored onto both half-lines and
    ``grid_mass`` the matching ``weight * density`` products.
    """

    atoms: tuple[tuple[float, float], ...]
    grid_loc: np.ndarray = np.zeros(0)
    grid_mass: np.ndarray = np.zeros(0)

    @property
    def total_mass(self) -> float:
        return sum(m for _, m in self.atoms) + float(np.sum(self.grid_mass))

    def atom_mass(self, loc: float) -> float:
        return sum(m for l, m in self.atoms if l == loc)

    def expectation(self, f) -> float:
        """``E[f(L)]`` over all mass; ``f`` must accept ``INF_LLR``."""
        total = sum(m * f(l) for l, m in self.atoms if m)
        if self.grid_loc.size:
            total += float(np.sum(self.grid_mass * f(self.grid_loc)))
        return total

    def moments(self) -> tuple[float, float]:
        """Mean and variance of the finite part (the infinite atom is excluded)."""
        locs = [l for l, m in self.atoms if math.isfinite(l)]
        mass = [m for l, m in self.atoms if math.isfinite(l)]
        loc = np.concatenate([np.array(locs, float), self.grid_loc])
        w = np.concatenate([np.array(mass, float), self.grid_mass])
        mean = float(np.sum(w * loc) / np.sum(w))
        return mean, float(np.sum(w * (loc - mean) ** 2) / np.sum(w))


def capacity(ch: ChannelModel) -> float:
    """Capacity in bits per channel use."""
    if ch.kind == BEC:
        return 1.0 - ch.param
    if ch.kind == BSC:
        q = ch.param
        return 1.0 - float(special.entr(q) + special.entr(1 - q)) / math.log(2)
    return _biawgn_capacity(ch.param)


@lru_cache(maxsize=256)
def _biawgn_capacity(sigma: float) -> float:
    mean, sd = 2.0 / sigma**2, 2.0 / sigma

    def integrand(l: float) -> float:
        gauss = math.exp(-0.5 * ((l - mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
        return gauss * np.logaddexp(0.0, -l)

    lo, hi = mean - 12 * sd, mean + 12 * sd
    val, _ = integrate.quad(integrand, lo, hi, limit=200, epsabs=1e-13, epsrel=1e-12)
    return 1.0 - val / math.log(2)


def llr_density(ch: ChannelModel) -> LlrDensity:
    if ch.kind == BEC:
        d = ch.param
        return LlrDensity(((0.0, d), (INF_LLR, 1.0 - d)))
    if ch.kind == BSC:
        q = ch.param
        if q == 0.0:
            return LlrDensity(((INF_LLR, 1.0),))
        L = math.log((1.0 - q) / q)
        if L == 0.0:
            return LlrDensity(((0.0, 1.0),))
        return LlrDensity(((L, 1.0 - q), (-L, q)))
    return _gaussian_density(ch.param)


def gaussian_llr_pdf(l: np.ndarray, sigma: float) -> np.ndarray:
    """Density of ``N(2/sigma^2, 4/sigma^2)``, the BIAWGN LLR given input 0."""
    mean, sd = 2.0 / sigma**2, 2.0 / sigma
    return np.exp(-0.5 * ((l - mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))


def _gaussian_density(sigma: float) -> LlrDensity:
    mean, sd = 2.0 / sigma**2, 2.0 / sigma
    upper = mean + QUAD_SPAN_SD * sd
    x, w = np.polynomial.legendre.leggauss(QUAD_NODES)
    l = 0.5 * upper * (x + 1.0)
    w = 0.5 * upper * w
    loc = np.concatenate([-l[::-1], l])
    mass = np.concatenate([(w * gaussian_llr_pdf(-l, sigma))[::-1], w * gaussian_llr_pdf(l, sigma)])
    return LlrDensity((), loc, mass)


def puncture_density(d: LlrDensity, p: float) -> LlrDensity:
    """Mixture ``p * delta_0 + (1 - p) * d``."""
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"puncture probability {p} outside [0, 1]")
    atoms = [(l, (1.0 - p) * m) for l, m in d.atoms if l != 0.0]
    atoms.insert(0, (0.0, p + (1.0 - p) * d.atom_mass(0.0)))
    return LlrDensity(tuple(atoms), d.grid_loc, (1.0 - p) * d.grid_mass)


def g_functional(d: LlrDensity, order: int) -> float:
    """``int_0^inf a(l) (1 + e^-l) tanh(l/2)^(2*order) dl`` on the positive half-line.

    Negative-LLR mass enters through the ``(1 + e^-l)`` factor, which relies on
    the density being symmetric.
    """
    if int(order) != order or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    k = 2 * int(order)
    total = 0.0
    for l, m in d.atoms:
        if l == INF_LLR:
            total += m
        elif l > 0.0:
            total += m * (1.0 + math.exp(-l)) * math.tanh(l / 2.0) ** k
    if d.grid_loc.size:
        pos = d.grid_loc > 0
        l = d.grid_loc[pos]
        total += float(np.sum(d.grid_mass[pos] * (1.0 + np.exp(-l)) * np.tanh(l / 2.0) ** k))
    return total


def transmit(
    ch: ChannelModel,
    codeword: np.ndarray,
    mask: np.ndarray | None,
    rng: np.random.Generator,
) -> np.ndarray:
    """Pass ``codeword`` through ``ch``; punctured positions are never observed.

    BEC returns int8 symbols in ``{0, 1, ERASED}``.  BSC and BIAWGN return
    LLRs, with ``0.0`` at punctured positions.
    """
    c = np.asarray(codeword).astype(np.int8)
    n = c.size
    punct = np.zeros(n, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if punct.shape != (n,):
        raise ValueError("puncture mask length does not match codeword")
    if ch.kind == BEC:
        out = c.copy()
        out[(rng.random(n) < ch.param) | punct] = ERASED
        return out
    if ch.kind == BSC:
        q = ch.param
        L = INF_LLR if q == 0.0 else math.log((1.0 - q) / q)
        y = c ^ (rng.random(n) < q)
        llr = L * (1.0 - 2.0 * y)
    else:
        sigma = ch.param
        y = (1.0 - 2.0 * c) + sigma * rng.standard_normal(n)
        llr = 2.0 * y / sigma**2
    llr[punct] = 0.0
    return llr


def class_g_functionals(ch: ChannelModel, p: float):
    """Order-indexed ``g`` for the unpunctured (X1) and punctured (X2) bit classes."""
    base = llr_density(ch)
    punct = puncture_density(base, p)

    @lru_cache(maxsize=None)
    def g1(order: int) -> float:
        return g_functional(base, order)

    @lru_cache(maxsize=None)
    def g2(order: int) -> float:
        return g_functional(punct, order)

    return g1, g2


def write_density_csv(d: LlrDensity) -> str:
    """``location,mass`` rows; the infinite atom is written as ``inf``."""
    lines = ["location,mass"]
    pairs = list(d.atoms) + list(zip(d.grid_loc.tolist(), d.grid_mass.tolist()))
    for l, m in sorted(pairs, key=lambda t: t[0]):
        lines.append(f"{l:.17g},{m:.17g}")
    return "\n".join(lines) + "\n"
