"""Sparse co-occurrence matrices in coordinate form.

Entries are kept canonical: sorted by (focus, context), duplicates summed
in input order, explicit zeros dropped. Canonical order makes merges and
file output deterministic.

File format (shared by all stages)::

    COOC v1 dim=<N> nnz=<M>
    focus<TAB>context<TAB>weight

with rows ascending by (focus, context) and weights printed as the
shortest decimal that round-trips to the same float.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .errors import DimensionMismatch, EmptyMatrix

_MAX_DIM = 2**31  # keeps focus*dim+context inside int64


def fmt_float(x: float) -> str:
    """Shortest decimal string that parses back to exactly ``x``."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _coalesce(focus, context, weight, dim):
    """Sort by cell and sum duplicates sequentially in input order."""
    keys = focus * np.int64(dim) + context
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    sw = weight[order]
    uniq, inverse = np.unique(sk, return_inverse=True)
    sums = np.bincount(inverse, weights=sw, minlength=uniq.shape[0])
    keep = sums != 0.0
    uniq = uniq[keep]
    sums = sums[keep]
    return uniq // dim, uniq % dim, sums


@dataclass(frozen=True)
class SparseMatrix:
    dim: int
    focus: np.ndarray    # int64
    context: np.ndarray  # int64
    weight: np.ndarray   # float64, strictly positive

    @classmethod
    def from_coo(
        cls,
        focus: Iterable[int] | np.ndarray,
        context: Iterable[int] | np.ndarray,
        weight: Iterable[float] | np.ndarray,
        dim: int,
    ) -> "SparseMatrix":
        if dim < 0 or dim > _MAX_DIM:
            raise ValueError(f"dim out of range: {dim}")
        f = np.asarray(focus, dtype=np.int64)
        c = np.asarray(context, dtype=np.int64)
        w = np.asarray(weight, dtype=np.float64)
        if not (f.shape == c.shape == w.shape):
            raise ValueError("focus/context/weight lengths differ")
        if f.size:
            if f.min() < 0 or c.min() < 0 or f.max() >= dim or c.max() >= dim:
                raise ValueError("cell index out of range")
            if w.min() < 0:
                raise ValueError("negative co-occurrence weight")
            nz = w != 0.0
            f, c, w = f[nz], c[nz], w[nz]
        if f.size:
            f, c, w = _coalesce(f, c, w, dim)
        else:
            f = np.zeros(0, dtype=np.int64)
            c = np.zeros(0, dtype=np.int64)
            w = np.zeros(0, dtype=np.float64)
        return cls(dim=int(dim), focus=f, context=c, weight=w)

    @classmethod
    def empty(cls, dim: int = 0) -> "SparseMatrix":
        return cls.from_coo([], [], [], dim)

    @property
    def nnz(self) -> int:
        return int(self.weight.shape[0])

    def to_dict(self) -> dict[tuple[int, int], float]:
        return {
            (int(f), int(c)): float(w)
            for f, c, w in zip(self.focus, self.context, self.weight)
        }

    def column_sums(self) -> np.ndarray:
        return np.bincount(self.context, weights=self.weight, minlength=self.dim)

    def save(self, dest: Union[str, Path, IO[str]]) -> None:
        if isinstance(dest, (str, Path)):
            with open(dest, "w", encoding="utf-8") as fh:
                self.save(fh)
            return
        dest.write(f"COOC v1 dim={self.dim} nnz={self.nnz}\n")
        for f, c, w in zip(self.focus.tolist(), self.context.tolist(), self.weight.tolist()):
            dest.write(f"{f}\t{c}\t{fmt_float(w)}\n")

    @classmethod
    def load(cls, src: Union[str, Path, IO[str]]) -> "SparseMatrix":
        if isinstance(src, (str, Path)):
            with open(src, "r", encoding="utf-8") as fh:
                return cls.load(fh)
        header = src.readline().strip()
        parts = header.split()
        if len(parts) != 4 or parts[0] != "COOC" or parts[1] != "v1":
            raise ValueError(f"bad matrix header: {header!r}")
        dim = int(parts[2].removeprefix("dim="))
        nnz = int(parts[3].removeprefix("nnz="))
        f = np.zeros(nnz, dtype=np.int64)
        c = np.zeros(nnz, dtype=np.int64)
        w = np.zeros(nnz, dtype=np.float64)
        for k in range(nnz):
            fs, cs, ws = src.readline().rstrip("\n").split("\t")
            f[k], c[k], w[k] = int(fs), int(cs), float(ws)
        return cls.from_coo(f, c, w, dim)


def normalize_columns(m: SparseMatrix) -> SparseMatrix:
    """Divide every nonempty column by its sum."""
    if m.nnz == 0:
        return m
    sums = m.column_sums()
    return SparseMatrix(
        dim=m.dim,
        focus=m.focus,
        context=m.context,
        weight=m.weight / sums[m.context],
    )


def scale_by_kth_largest(m: SparseMatrix, k: int, distinct: bool = False) -> SparseMatrix:
    """Divide all entries by the k-th largest entry value.

    k clamps to the number of entries (or distinct values when
    ``distinct``). Duplicated values occupy one rank each by default.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if m.nnz == 0:
        raise EmptyMatrix("cannot scale an empty matrix")
    if distinct:
        values = np.unique(m.weight)  # ascending, deduplicated
        kp = min(k, values.shape[0])
        s = values[values.shape[0] - kp]
    else:
        kp = min(k, m.nnz)
        s = np.partition(m.weight, m.nnz - kp)[m.nnz - kp]
    return SparseMatrix(
        dim=m.dim, focus=m.focus, context=m.context, weight=m.weight / s
    )


def merge_sum(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Cell-wise sum over the union of occupied cells."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} != {b.dim}")
    return SparseMatrix.from_coo(
        np.concatenate([a.focus, b.focus]),
        np.concatenate([a.context, b.context]),
        np.concatenate([a.weight, b.weight]),
        a.dim,
    )
