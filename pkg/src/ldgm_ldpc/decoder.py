"""Iterative erasure decoding on the mother graph.

Flooding schedule: every check updates from the previous variable messages,
then every variable updates from the fresh check messages.  Both sides start
with all edge messages erased, so the first iteration only loads the channel;
this keeps iteration ``l`` aligned with density-evolution step ``l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .channel import ERASED
from .ensemble import LdgmLdpcGraph
from .errors import DecoderIntegrityError
from .gf2 import SparseBinMatrix

DEFAULT_MAX_ITERS = 200

# trace columns: erased fraction of v->c and c->v messages per edge class
TRACE_COLUMNS = ("x1", "x2", "x3", "y1", "y2", "y3")

GraphLike = Union[LdgmLdpcGraph, SparseBinMatrix]


@dataclass
class DecodeResult:
    resolved: np.ndarray  # uint8 bit values, 0 where unknown
    known_mask: np.ndarray
    iterations: int
    converged: bool
    n1: int = 0
    trace: np.ndarray | None = None  # (iterations, 6) in TRACE_COLUMNS order


@dataclass(frozen=True, eq=False)
class _Edges:
    chk: np.ndarray
    var: np.ndarray
    n_chk: int
    n_var: int
    n1: int
    edge_class: np.ndarray  # 0: X1 identity, 1: X2-LDGM, 2: X2-LDPC


def _edges(mother: SparseBinMatrix, n1: int) -> _Edges:
    chk = mother.row_of_entry
    var = mother.indices
    cls = np.full(var.size, 2, dtype=np.int8)
    ldgm = chk < n1
    cls[ldgm & (var < n1)] = 0
    cls[ldgm & (var >= n1)] = 1
    return _Edges(chk, var, mother.n_rows, mother.n_cols, n1, cls)


@lru_cache(maxsize=8)
def _graph_edges(graph: LdgmLdpcGraph) -> _Edges:
    return _edges(graph.mother, graph.n1)


def _split(graph: GraphLike) -> tuple[SparseBinMatrix, _Edges]:
    if isinstance(graph, LdgmLdpcGraph):
        return graph.mother, _graph_edges(graph)
    return graph, _edges(graph, 0)


def decode(
    graph: GraphLike,
    received: np.ndarray,
    max_iters: int = DEFAULT_MAX_ITERS,
    *,
    x1_feedback: bool = False,
    trace: bool = False,
) -> DecodeResult:
    """Erasure message passing; ``received`` holds 0/1 or ``ERASED`` per bit.

    With ``x1_feedback`` the degree-one X1 nodes send their posterior back to
    their check instead of the extrinsic (channel-only) message.
    """
    mother, e = _split(graph)
    rx = np.asarray(received)
    if rx.shape != (mother.n_cols,):
        raise ValueError(f"received length {rx.shape} != n={mother.n_cols}")
    chan_known = rx != ERASED
    chan_val = np.where(chan_known, rx, 0).astype(np.int64) & 1

    if chan_known.all():
        syn = np.bincount(e.chk, weights=chan_val[e.var], minlength=e.n_chk).astype(np.int64) & 1
        if syn.any():
            raise DecoderIntegrityError(f"{int(syn.sum())} checks violated by unerased input")
        return DecodeResult(chan_val.astype(np.uint8), chan_known.copy(), 0, True, e.n1,
                            np.zeros((0, 6)) if trace else None)

    n_edges = e.var.size
    ck_e = chan_known[e.var]
    feedback = (e.var < e.n1) if x1_feedback else np.zeros(n_edges, dtype=bool)
    v2c_known = np.zeros(n_edges, dtype=bool)
    v2c_val = np.zeros(n_edges, dtype=np.int64)
    c2v_known = np.zeros(n_edges, dtype=bool)
    post_known = chan_known.copy()
    post_val = chan_val.copy()
    rows: list[np.ndarray] = []
    class_sizes = np.bincount(e.edge_class, minlength=3).astype(float)

    iterations = 0
    for _ in range(max_iters):
        # check side: extrinsic parity over the other incoming messages
        unknown = ~v2c_known
        n_unknown = np.bincount(e.chk, weights=unknown, minlength=e.n_chk)
        parity = np.bincount(e.chk, weights=v2c_val * v2c_known, minlength=e.n_chk).astype(np.int64) & 1
        full = n_unknown == 0
        if np.any(full & (parity == 1)):
            raise DecoderIntegrityError("fully known check has odd parity")
        new_c2v_known = (n_unknown[e.chk] - unknown) == 0
        c2v_val = (parity[e.chk] ^ (v2c_val * v2c_known)) & 1

        # variable side
        n_in = np.bincount(e.var, weights=new_c2v_known, minlength=e.n_var)
        ones_in = np.bincount(e.var, weights=new_c2v_known * c2v_val, minlength=e.n_var)
        bad = (ones_in != 0) & (ones_in != n_in)
        bad |= chan_known & (n_in > 0) & (ones_in != n_in * chan_val)
        if bad.any():
            raise DecoderIntegrityError("conflicting values reach a variable node")
        post_known = chan_known | (n_in > 0)
        post_val = np.where(chan_known, chan_val, (ones_in > 0).astype(np.int64))
        others = n_in[e.var] - new_c2v_known
        new_v2c_known = ck_e | (others > 0) | (feedback & post_known[e.var])
        new_v2c_val = np.where(new_v2c_known, post_val[e.var], 0)

        changed = (not np.array_equal(new_c2v_known, c2v_known)
                   or not np.array_equal(new_v2c_known, v2c_known))
        c2v_known, v2c_known, v2c_val = new_c2v_known, new_v2c_known, new_v2c_val
        if not changed:
            break
        iterations += 1
        if trace:
            x = np.bincount(e.edge_class, weights=~v2c_known, minlength=3) / np.maximum(class_sizes, 1)
            y = np.bincount(e.edge_class, weights=~c2v_known, minlength=3) / np.maximum(class_sizes, 1)
            rows.append(np.concatenate([x, y]))
        if post_known.all() and v2c_known.all():
            break

    resolved = np.where(post_known, post_val, 0).astype(np.uint8)
    return DecodeResult(
        resolved,
        post_known,
        iterations,
        bool(post_known.all()),
        e.n1,
        np.array(rows).reshape(-1, 6) if trace else None,
    )


def peel(mother: SparseBinMatrix, received: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reference peeling decoder: solve any check with exactly one unknown neighbour.

    Returns ``(values, known)``; plain Python, meant as an oracle for small codes.
    """
    rows = mother.rows()
    n = mother.n_cols
    known = [int(r) != ERASED for r in received]
    value = [int(r) if k else 0 for r, k in zip(received, known)]
    var_checks: list[list[int]] = [[] for _ in range(n)]
    for c, row in enumerate(rows):
        for v in row:
            var_checks[v].append(c)
    pending = list(range(len(rows)))
    while pending:
        c = pending.pop()
        unknown = [v for v in rows[c] if not known[v]]
        if len(unknown) != 1:
            continue
        v = unknown[0]
        value[v] = sum(value[u] for u in rows[c] if u != v) % 2
        known[v] = True
        pending.extend(var_checks[v])
    return np.array(value, dtype=np.uint8), np.array(known, dtype=bool)


def bit_erasure_rate(result: DecodeResult, which: str = "all") -> float:
    """Fraction of unresolved bits in block ``X1``, ``X2`` or ``all``."""
    mask = result.known_mask
    if which == "X1":
        block = mask[: result.n1]
    elif which == "X2":
        block = mask[result.n1:]
    elif which == "all":
        block = mask
    else:
        raise ValueError(f"unknown block {which!r}")
    return float(np.mean(~block)) if block.size else 0.0
