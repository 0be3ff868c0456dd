"""Irregular LDGM-LDPC ensembles realized as a mother parity-check code.

Bit layout of a mother codeword is ``X1 || X2``: ``n1`` LDGM output bits
followed by ``n2`` bits of the lower LDPC code.  Check ``m < n1`` of the
mother matrix enforces ``X1[m] = sum_v X2[v] G[v, m]``; the remaining checks
are the rows of ``H`` shifted by ``n1``.

Degree conventions: ``lambda_G`` and ``rho_G`` count only X2-side sockets of
the LDGM layer.  Each LDGM check additionally carries its identity edge to one
X1 bit, so a check drawn from ``rho_G`` with i sockets has i + 1 neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2
from .degree_dist import (
    DegreeDistribution,
    average_degree,
    design_rate,
    node_perspective,
)
from .errors import ConfigurationError
from .gf2 import SparseBinMatrix

MULTI_EDGE_RETRIES = 100
SOCKET_SLACK = 0.01


@dataclass(frozen=True)
class EnsembleParams:
    n1: int
    n2: int
    lambda_G: DegreeDistribution
    rho_G: DegreeDistribution
    lambda_H: DegreeDistribution
    rho_H: DegreeDistribution
    puncture_p: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise ConfigurationError("n1 and n2 must be positive")
        if not 0.0 <= self.puncture_p <= 1.0:
            raise ConfigurationError(f"puncture probability {self.puncture_p} outside [0, 1]")
        for name in ("lambda_G", "rho_G", "lambda_H", "rho_H"):
            if getattr(self, name).perspective != "edge":
                raise ConfigurationError(f"{name} must be edge-perspective")
        design_rate(self.lambda_H, self.rho_H)
        g_var = self.n2 * average_degree(self.lambda_G)
        g_chk = self.n1 * average_degree(self.rho_G)
        if abs(g_var - g_chk) > max(1.0, SOCKET_SLACK * g_var):
            raise ConfigurationError(
                f"LDGM socket counts disagree: n2*avg(lambda_G)={g_var:.6g} "
                f"vs n1*avg(rho_G)={g_chk:.6g}"
            )

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def p1(self) -> float:
        return self.n1 / self.n

    @property
    def p2(self) -> float:
        return self.n2 / self.n

    @property
    def rate_H(self) -> float:
        return design_rate(self.lambda_H, self.rho_H)

    @property
    def c_H(self) -> int:
        return max(1, round(self.n2 * (1.0 - self.rate_H)))

    @property
    def mother_design_rate(self) -> float:
        return 1.0 - (self.n1 + self.c_H) / self.n


@dataclass(frozen=True, eq=False)
class LdgmLdpcGraph:
    G: SparseBinMatrix  # n2 x n1
    H: SparseBinMatrix  # c_H x n2
    mother: SparseBinMatrix = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mother", build_mother_matrix(self.G, self.H))

    @property
    def n1(self) -> int:
        return self.G.n_cols

    @property
    def n2(self) -> int:
        return self.G.n_rows

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @cached_property
    def h_nullspace(self) -> np.ndarray:
        return gf2.nullspace_basis(self.H)

    @cached_property
    def dimension(self) -> int:
        """Dimension of the mother code (equal to that of ``null(H)``)."""
        return int(self.h_nullspace.shape[0])

    def true_rate(self) -> float:
        return self.dimension / self.n


@dataclass(frozen=True)
class PuncturePattern:
    mask: np.ndarray
    n1: int

    def __post_init__(self) -> None:
        if self.mask[: self.n1].any():
            raise ValueError("X1 bits are never punctured")

    def to_bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.mask)


# -- degree sequences ----------------------------------------------------------

def apportion(fractions: np.ndarray, total: int) -> np.ndarray:
    """Largest-remainder apportionment of ``total`` items over ``fractions``."""
    raw = np.asarray(fractions, dtype=float) * total
    counts = np.floor(raw).astype(np.int64)
    short = total - int(counts.sum())
    if short > 0:
        # stable order keeps ties deterministic
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def node_degree_sequence(d: DegreeDistribution, n_nodes: int) -> np.ndarray:
    """Per-node degrees (sorted) realizing edge distribution ``d`` on ``n_nodes``."""
    counts = apportion(np.asarray(node_perspective(d).coeffs), n_nodes)
    return np.repeat(np.arange(1, counts.size + 1), counts)


def match_socket_total(degrees: np.ndarray, target: int, d: DegreeDistribution) -> np.ndarray:
    """Shift single sockets on nodes of the most probable degree until the sum hits ``target``."""
    degrees = degrees.copy()
    diff = target - int(degrees.sum())
    if diff == 0:
        return degrees
    mode = int(np.argmax(node_perspective(d).coeffs)) + 1
    step = 1 if diff > 0 else -1
    candidates = np.flatnonzero(degrees == mode)
    if candidates.size == 0:
        candidates = np.arange(degrees.size)
    i = 0
    while diff != 0:
        k = candidates[i % candidates.size]
        if 1 <= degrees[k] + step <= d.max_degree:
            degrees[k] += step
            diff -= step
        i += 1
        if i > 4 * (abs(diff) + degrees.size) + 10:
            raise ConfigurationError("cannot reconcile socket counts")
    return degrees


def configuration_edges(
    var_deg: np.ndarray, chk_deg: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform socket matching; parallel edges are re-drawn by socket swaps."""
    if var_deg.sum() != chk_deg.sum():
        raise ConfigurationError("socket totals differ")
    var_sock = np.repeat(np.arange(var_deg.size), var_deg)
    chk_sock = rng.permutation(np.repeat(np.arange(chk_deg.size), chk_deg))
    n_var = max(int(var_deg.size), 1)
    for _ in range(MULTI_EDGE_RETRIES + 1):
        key = chk_sock * n_var + var_sock
        order = np.argsort(key, kind="stable")
        dup = np.zeros(key.size, dtype=bool)
        dup[order[1:]] = key[order[1:]] == key[order[:-1]]
        bad = np.flatnonzero(dup)
        if bad.size == 0:
            return chk_sock, var_sock
        partners = rng.integers(0, key.size, size=bad.size)
        for a, b in zip(bad.tolist(), partners.tolist()):
            chk_sock[a], chk_sock[b] = chk_sock[b], chk_sock[a]
    raise ConfigurationError(
        f"parallel edges persist after {MULTI_EDGE_RETRIES} resampling rounds"
    )


# -- operations ------------------------------------------------------------------

def build_mother_matrix(G: SparseBinMatrix, H: SparseBinMatrix) -> SparseBinMatrix:
    """Stack ``[I | G^T]`` over ``[0 | H]`` as the mother parity-check matrix."""
    n2, n1 = G.shape
    if H.n_cols != n2:
        raise ValueError(f"H has {H.n_cols} columns, expected n2={n2}")
    Gt = G.transpose()
    rows = np.concatenate([np.arange(n1), Gt.row_of_entry, n1 + H.row_of_entry])
    cols = np.concatenate([np.arange(n1), n1 + Gt.indices, n1 + H.indices])
    return SparseBinMatrix.from_entries(rows, cols, (n1 + H.n_rows, n1 + n2))


def sample_graph(params: EnsembleParams, seed: int | None = None) -> LdgmLdpcGraph:
    """Draw G and H independently from the configuration model."""
    rng = np.random.default_rng(params.seed if seed is None else seed)
    n1, n2 = params.n1, params.n2

    g_var = rng.permutation(node_degree_sequence(params.lambda_G, n2))
    g_chk = node_degree_sequence(params.rho_G, n1)
    g_chk = rng.permutation(match_socket_total(g_chk, int(g_var.sum()), params.rho_G))
    if g_chk.max() > n2 or g_var.max() > n1:
        raise ConfigurationError("LDGM degree exceeds the opposite layer size")
    chk, var = configuration_edges(g_var, g_chk, rng)
    G = SparseBinMatrix.from_entries(var, chk, (n2, n1))

    c_H = params.c_H
    h_var = rng.permutation(node_degree_sequence(params.lambda_H, n2))
    h_chk = node_degree_sequence(params.rho_H, c_H)
    h_chk = rng.permutation(match_socket_total(h_chk, int(h_var.sum()), params.rho_H))
    if h_chk.max() > n2 or h_var.max() > c_H:
        raise ConfigurationError("LDPC degree exceeds the opposite layer size")
    chk, var = configuration_edges(h_var, h_chk, rng)
    H = SparseBinMatrix.from_entries(chk, var, (c_H, n2))
    return LdgmLdpcGraph(G, H)


def sample_codeword(graph: LdgmLdpcGraph, rng: np.random.Generator) -> np.ndarray:
    """Uniform mother codeword: random combination of ``null(H)``, then ``X1 = X2 G``."""
    basis = graph.h_nullspace
    coeffs = rng.integers(0, 2, size=basis.shape[0], dtype=np.int64)
    x2 = ((coeffs @ basis.astype(np.int64)) & 1).astype(np.uint8)
    x1 = gf2.matvec(graph.G.transpose(), x2)
    return np.concatenate([x1, x2])


def sample_puncture_pattern(params: EnsembleParams, rng: np.random.Generator,
                            p: float | None = None) -> PuncturePattern:
    p = params.puncture_p if p is None else p
    mask = np.zeros(params.n, dtype=bool)
    mask[params.n1:] = rng.random(params.n2) < p
    return PuncturePattern(mask, params.n1)


def beta_profile(graph: LdgmLdpcGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-check counts of X1 and X2 neighbours in the mother matrix."""
    m = graph.mother
    in_x1 = (m.indices < graph.n1).astype(np.int64)
    b1 = np.bincount(m.row_of_entry, weights=in_x1, minlength=m.n_rows).astype(np.int64)
    return b1, m.row_degrees() - b1


def empirical_edge_distribution(degrees: np.ndarray) -> dict[int, float]:
    """Edge-perspective histogram of a node degree sequence."""
    counts = np.bincount(degrees)
    edges = counts * np.arange(counts.size)
    total = edges.sum()
    return {d: float(e / total) for d, e in enumerate(edges) if e}
