"""Weighted least-squares embedding trainer over a co-occurrence matrix.

Minimizes sum over cells of f(x) * (w_i . wt_j + b_i + bt_j - ln x)^2
with AdaGrad per-coordinate step sizes. Merged matrices hold normalized
weights well below the default x_max=100, so the weighting function stays
in its power regime; set x_max=1.0 to saturate it instead.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO

import numpy as np

from ._kernels import glove_epoch
from .errors import DivergenceDetected, EmptyMatrix, NonPositiveCount
from .matrix import SparseMatrix, fmt_float
from .vocab import Vocabulary


@dataclass(frozen=True)
class GloveParams:
    dims: int = 200
    iterations: int = 50
    learning_rate: float = 0.05
    x_max: float = 100.0
    weight_exponent: float = 0.75
    seed: int = 1
    deterministic: bool = True

    def __post_init__(self):
        if self.dims < 1:
            raise ValueError("dims must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if not 0.0 < self.weight_exponent <= 1.0:
            raise ValueError("weight_exponent must be in (0, 1]")


@dataclass
class EmbeddingModel:
    w: np.ndarray    # (n_terms, dims) focus vectors
    wt: np.ndarray   # (n_terms, dims) context vectors
    b: np.ndarray    # (n_terms,) focus biases
    bt: np.ndarray   # (n_terms,) context biases

    @property
    def n_terms(self) -> int:
        return int(self.w.shape[0])

    @property
    def dims(self) -> int:
        return int(self.w.shape[1])

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(self.w.copy(), self.wt.copy(), self.b.copy(), self.bt.copy())


class Combine(enum.Enum):
    SUM_FOCUS_CONTEXT = "sum"
    FOCUS_ONLY = "focus"


def glove_weight(x: float, x_max: float, exponent: float) -> float:
    """(x/x_max)^exponent below x_max, 1 at and above it."""
    if x <= 0:
        raise NonPositiveCount(f"count must be positive, got {x}")
    if x < x_max:
        return (x / x_max) ** exponent
    return 1.0


def cell_loss(model: EmbeddingModel, i: int, j: int, x: float, params: GloveParams) -> float:
    if x <= 0:
        raise NonPositiveCount(f"count must be positive, got {x}")
    f = glove_weight(x, params.x_max, params.weight_exponent)
    diff = float(np.dot(model.w[i], model.wt[j])) + float(model.b[i]) + float(model.bt[j]) - np.log(x)
    return f * diff * diff


def cell_gradients(
    model: EmbeddingModel, i: int, j: int, x: float, params: GloveParams
) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Analytic gradients of cell_loss w.r.t. (w_i, wt_j, b_i, bt_j)."""
    if x <= 0:
        raise NonPositiveCount(f"count must be positive, got {x}")
    f = glove_weight(x, params.x_max, params.weight_exponent)
    diff = float(np.dot(model.w[i], model.wt[j])) + float(model.b[i]) + float(model.bt[j]) - np.log(x)
    g = 2.0 * f * diff
    return g * model.wt[j], g * model.w[i], g, g


def total_loss(model: EmbeddingModel, m: SparseMatrix, params: GloveParams) -> float:
    return sum(
        cell_loss(model, int(i), int(j), float(x), params)
        for i, j, x in zip(m.focus, m.context, m.weight)
    )


def init_model(n_terms: int, params: GloveParams) -> EmbeddingModel:
    """All components uniform in (-0.5/dims, +0.5/dims), from params.seed.

    Draw order is w, wt, b, bt so the layout is reproducible.
    """
    rng = np.random.default_rng(params.seed)
    d = params.dims
    scale = 1.0 / d
    w = (rng.random((n_terms, d)) - 0.5) * scale
    wt = (rng.random((n_terms, d)) - 0.5) * scale
    b = (rng.random(n_terms) - 0.5) * scale
    bt = (rng.random(n_terms) - 0.5) * scale
    return EmbeddingModel(w, wt, b, bt)


def _check_finite(model: EmbeddingModel, epoch: int) -> None:
    for name, arr in (("w", model.w), ("wt", model.wt), ("b", model.b), ("bt", model.bt)):
        if not np.all(np.isfinite(arr)):
            bad = int(np.argwhere(~np.isfinite(arr.reshape(-1)))[0][0])
            raise DivergenceDetected(epoch, f"{name} flat index {bad}")


def train(
    m: SparseMatrix,
    params: GloveParams,
    threads: int = 1,
    log: IO[str] | None = None,
) -> tuple[EmbeddingModel, list[float]]:
    """Train on all matrix cells; returns the model and per-epoch losses.

    Deterministic mode updates cells sequentially in the shuffled order
    and is bit-reproducible. With deterministic=False and threads > 1 the
    shuffled cells are sharded across threads updating shared parameters
    without locks; occasional lost updates are accepted and results vary
    run to run.
    """
    if m.nnz == 0:
        raise EmptyMatrix("cannot train on an empty matrix")
    n = m.dim
    model = init_model(n, params)
    gw = np.ones_like(model.w)
    gwt = np.ones_like(model.wt)
    gb = np.ones_like(model.b)
    gbt = np.ones_like(model.bt)

    log_x = np.log(m.weight)
    ratio = m.weight / params.x_max
    f_weight = np.where(
        m.weight < params.x_max, ratio**params.weight_exponent, 1.0
    )

    rng = np.random.default_rng(params.seed)
    losses: list[float] = []
    workers = 1 if params.deterministic else max(1, threads)
    for epoch in range(1, params.iterations + 1):
        order = rng.permutation(m.nnz).astype(np.int64)
        if workers == 1:
            loss = float(
                glove_epoch(
                    m.focus, m.context, log_x, f_weight, order,
                    model.w, model.wt, model.b, model.bt,
                    gw, gwt, gb, gbt, params.learning_rate,
                )
            )
        else:
            shards = np.array_split(order, workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futs = [
                    pool.submit(
                        glove_epoch,
                        m.focus, m.context, log_x, f_weight, shard,
                        model.w, model.wt, model.b, model.bt,
                        gw, gwt, gb, gbt, params.learning_rate,
                    )
                    for shard in shards if shard.size
                ]
                loss = float(sum(f.result() for f in futs))
        _check_finite(model, epoch)
        if not np.isfinite(loss):
            raise DivergenceDetected(epoch, "epoch loss")
        losses.append(loss)
        if log is not None:
            log.write(f"{epoch}\t{fmt_float(loss)}\n")
    return model, losses


def emit_embeddings(
    model: EmbeddingModel,
    v: Vocabulary,
    combine: Combine,
    out: IO[str],
) -> None:
    """One line per term: the term, then its vector components.

    Entities and predicates are written as their IRIs, words as plain
    tokens; the vector is w+wt or w alone depending on ``combine``.
    """
    if len(v) != model.n_terms:
        raise ValueError("vocabulary size does not match model")
    vecs = model.w + model.wt if combine is Combine.SUM_FOCUS_CONTEXT else model.w
    for tid in range(len(v)):
        row = " ".join(fmt_float(x) for x in vecs[tid].tolist())
        out.write(f"{v.terms[tid]} {row}\n")


def read_embeddings(src: IO[str]) -> dict[str, np.ndarray]:
    """Parse an embedding file back into term -> vector."""
    out: dict[str, np.ndarray] = {}
    for line in src:
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split(" ")
        out[parts[0]] = np.array([float(p) for p in parts[1:]], dtype=np.float64)
    return out
