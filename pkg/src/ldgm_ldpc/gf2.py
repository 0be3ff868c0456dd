"""Sparse binary matrices and GF(2) elimination.

Matrices are stored row-compressed (``indptr``/``indices``) with sorted,
duplicate-free column indices.  Rank and nullspace run Gaussian elimination
on a dense copy packed into 64-bit words; elimination fills in anyway.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class SparseBinMatrix:
    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self) -> None:
        indptr = np.asarray(self.indptr, dtype=np.int64)
        indices = np.asarray(self.indices, dtype=np.int64)
        if indptr.shape != (self.n_rows + 1,) or indptr[0] != 0:
            raise ValueError("indptr must have n_rows + 1 entries starting at 0")
        if indptr[-1] != indices.size or np.any(np.diff(indptr) < 0):
            raise ValueError("indptr inconsistent with indices")
        if indices.size:
            if indices.min() < 0 or indices.max() >= self.n_cols:
                raise ValueError("column index out of range")
            # strictly increasing within every row
            step = np.diff(indices)
            row_start = np.zeros(indices.size, dtype=bool)
            row_start[indptr[:-1][np.diff(indptr) > 0]] = True
            if np.any((step <= 0) & ~row_start[1:]):
                raise ValueError("column indices must be strictly increasing per row")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], n_cols: int) -> "SparseBinMatrix":
        sorted_rows = [sorted(set(int(c) for c in r)) for r in rows]
        indptr = np.zeros(len(sorted_rows) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in sorted_rows])
        indices = np.fromiter((c for r in sorted_rows for c in r), dtype=np.int64,
                              count=int(indptr[-1]))
        return cls(len(sorted_rows), n_cols, indptr, indices)

    @classmethod
    def from_entries(
        cls, row_idx: np.ndarray, col_idx: np.ndarray, shape: tuple[int, int]
    ) -> "SparseBinMatrix":
        """Build from coordinate lists; duplicate coordinates are an error."""
        n_rows, n_cols = shape
        row_idx = np.asarray(row_idx, dtype=np.int64)
        col_idx = np.asarray(col_idx, dtype=np.int64)
        order = np.lexsort((col_idx, row_idx))
        r, c = row_idx[order], col_idx[order]
        if r.size > 1 and np.any((r[1:] == r[:-1]) & (c[1:] == c[:-1])):
            raise ValueError("duplicate entries (parallel edges)")
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(np.bincount(r, minlength=n_rows))
        return cls(n_rows, n_cols, indptr, c)

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "SparseBinMatrix":
        a = np.asarray(a) % 2
        r, c = np.nonzero(a)
        return cls.from_entries(r, c, a.shape)

    @classmethod
    def identity(cls, n: int) -> "SparseBinMatrix":
        return cls(n, n, np.arange(n + 1), np.arange(n))

    # -- views ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def rows(self) -> list[list[int]]:
        return [self.row(i).tolist() for i in range(self.n_rows)]

    @cached_property
    def row_of_entry(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_rows), np.diff(self.indptr))

    def row_degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def col_degrees(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_cols)

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.shape, dtype=np.uint8)
        a[self.row_of_entry, self.indices] = 1
        return a

    def transpose(self) -> "SparseBinMatrix":
        return SparseBinMatrix.from_entries(
            self.indices, self.row_of_entry, (self.n_cols, self.n_rows)
        )

    @property
    def T(self) -> "SparseBinMatrix":
        return self.transpose()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseBinMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseBinMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def matvec(m: SparseBinMatrix, v: np.ndarray) -> np.ndarray:
    """``m @ v`` over GF(2)."""
    v = np.asarray(v)
    if v.shape != (m.n_cols,):
        raise ValueError(f"vector of length {v.shape} does not match {m.n_cols} columns")
    hits = (v[m.indices] & 1).astype(np.int64)
    return (np.bincount(m.row_of_entry, weights=hits, minlength=m.n_rows).astype(np.int64)
            & 1).astype(np.uint8)


# -- packed elimination --------------------------------------------------------

def _pack(a: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into little-endian uint64 words along the rows."""
    n_rows, n_cols = a.shape
    n_words = max(1, -(-n_cols // 64))
    padded = np.zeros((n_rows, n_words * 64), dtype=np.uint8)
    padded[:, :n_cols] = a
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").copy()


def _unpack(words: np.ndarray, n_cols: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n_cols]


def _rref(m: SparseBinMatrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (packed words, nonzero rows only) and pivot columns."""
    work = _pack(m.to_dense())
    n_rows = work.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(m.n_cols):
        if r == n_rows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1) << np.uint64(b)
        hits = np.flatnonzero(work[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            work[[r, p]] = work[[p, r]]
        mask = (work[:, w] & bit) != 0
        mask[r] = False
        if mask.any():
            work[mask, w:] ^= work[r, w:]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def rank(m: SparseBinMatrix) -> int:
    return len(_rref(m)[1])


def nullspace_basis(m: SparseBinMatrix) -> np.ndarray:
    """Basis of ``{x : m x = 0}`` as rows of a ``(cols - rank) x cols`` uint8 array."""
    packed, pivots = _rref(m)
    free = np.setdiff1d(np.arange(m.n_cols), pivots)
    basis = np.zeros((free.size, m.n_cols), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if pivots:
        reduced = _unpack(packed, m.n_cols)
        basis[:, pivots] = reduced[:, free].T
    return basis


# -- alist ----------------------------------------------------------------------

def write_alist(m: SparseBinMatrix, dest: str | Path | TextIO) -> None:
    """Write MacKay's alist format (column lists then row lists, 1-indexed, 0-padded)."""
    cols = m.transpose()
    cdeg, rdeg = cols.row_degrees(), m.row_degrees()
    cmax = int(cdeg.max(initial=0))
    rmax = int(rdeg.max(initial=0))
    out = io.StringIO()
    out.write(f"{m.n_cols} {m.n_rows}\n{cmax} {rmax}\n")
    out.write(" ".join(map(str, cdeg.tolist())) + "\n")
    out.write(" ".join(map(str, rdeg.tolist())) + "\n")
    for mat, width in ((cols, cmax), (m, rmax)):
        for i in range(mat.n_rows):
            entries = (mat.row(i) + 1).tolist()
            # an all-zero matrix still gets one padding token so no line is blank
            entries += [0] * (max(width, 1) - len(entries))
            out.write(" ".join(map(str, entries)) + "\n")
    text = out.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def read_alist(src: str | Path | TextIO) -> SparseBinMatrix:
    if isinstance(src, (str, Path)):
        text = Path(src).read_text()
    else:
        text = src.read()
    lines = [[int(t) for t in ln.split()] for ln in text.splitlines() if ln.strip()]
    try:
        n_cols, n_rows = lines[0][:2]
        cdeg, rdeg = lines[2], lines[3]
        if len(cdeg) != n_cols or len(rdeg) != n_rows:
            raise ConfigurationError("alist degree lines do not match dimensions")
        col_lists = lines[4:4 + n_cols]
        row_lists = lines[4 + n_cols:4 + n_cols + n_rows]
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"malformed alist: {exc}") from None
    if len(col_lists) != n_cols:
        raise ConfigurationError("alist truncated")
    r_idx, c_idx = [], []
    for j, entries in enumerate(col_lists):
        nz = [e - 1 for e in entries if e > 0]
        if len(nz) != cdeg[j]:
            raise ConfigurationError(f"column {j} degree mismatch")
        r_idx.extend(nz)
        c_idx.extend([j] * len(nz))
    m = SparseBinMatrix.from_entries(np.array(r_idx), np.array(c_idx), (n_rows, n_cols))
    if row_lists:
        if len(row_lists) != n_rows:
            raise ConfigurationError("alist row section truncated")
        check = SparseBinMatrix.from_rows(
            [[e - 1 for e in r if e > 0] for r in row_lists], n_cols)
        if check != m:
            raise ConfigurationError("alist row and column sections disagree")
    return m
