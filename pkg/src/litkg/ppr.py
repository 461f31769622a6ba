"""Graph-side co-occurrence via bookmark-coloring personalized PageRank.

One score vector per seed entity, run on the forward and the edge-reversed
adjacency; the two are added, the seed's own score is removed, and the
column is L1-normalized. Optionally every paint push along an edge also
credits that edge's predicate, putting predicates into the columns.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import bca_push
from .errors import SeedNotFound
from .graph import AdjacencyView, Direction, build_adjacency
from .matrix import SparseMatrix
from .rdf import KnowledgeGraph
from .vocab import TermKind


@dataclass(frozen=True)
class PprParams:
    restart_alpha: float = 0.15
    epsilon: float = 1e-5
    include_predicates: bool = False

    def __post_init__(self):
        if not 0.0 < self.restart_alpha < 1.0:
            raise ValueError("restart_alpha must be in (0, 1)")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class ScoreVector:
    """Sparse nonzero PPR scores; total mass is at most 1."""

    ids: np.ndarray     # int64, ascending
    values: np.ndarray  # float64, strictly positive

    def as_dict(self) -> dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.ids, self.values)}

    @property
    def total(self) -> float:
        return float(self.values.sum())


def _run_push(view: AdjacencyView, seed: int, params: PprParams, credit: bool):
    return bca_push(
        view.indptr,
        view.targets,
        view.edge_predicates,
        view.n_terms,
        seed,
        params.restart_alpha,
        params.epsilon,
        credit,
        view.weights,
    )


def bca_ppr(view: AdjacencyView, seed: int, params: PprParams) -> ScoreVector:
    """Approximate the restart-at-seed PageRank distribution.

    Deterministic: the push queue is ordered by paint descending with term
    id as tiebreak, so identical inputs give bit-identical scores.
    """
    if not 0 <= seed < view.n_terms:
        raise SeedNotFound(f"seed {seed} not in view of {view.n_terms} terms")
    score, _ = _run_push(view, seed, params, False)
    ids = np.nonzero(score)[0]
    return ScoreVector(ids=ids.astype(np.int64), values=score[ids])


def _column(forward, reversed_, seed, params):
    score_f, credit_f = _run_push(forward, seed, params, params.include_predicates)
    score_r, credit_r = _run_push(reversed_, seed, params, params.include_predicates)
    combined = score_f + score_r
    if params.include_predicates:
        combined += credit_f + credit_r
    combined[seed] = 0.0  # an entity is not its own context
    total = combined.sum()
    if total <= 0.0:
        return None
    ids = np.nonzero(combined)[0]
    return ids, combined[ids] / total


def graph_cooccurrence(
    g: KnowledgeGraph, params: PprParams, threads: int = 1
) -> SparseMatrix:
    """Assemble the per-entity PPR columns into one normalized matrix.

    Column ``e`` (context index e) holds the combined forward+reversed
    scores seen from entity ``e``, summing to 1. Isolated entities yield
    empty columns. Per-seed runs are independent; with ``threads > 1``
    they execute concurrently and are assembled in seed order, so the
    result does not depend on thread scheduling.
    """
    forward = build_adjacency(g, Direction.FORWARD)
    reversed_ = build_adjacency(g, Direction.REVERSED)
    seeds = g.vocab.ids_of_kind(TermKind.ENTITY)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(lambda s: _column(forward, reversed_, s, params), seeds))
    else:
        columns = [_column(forward, reversed_, s, params) for s in seeds]

    focus_parts = []
    context_parts = []
    weight_parts = []
    for seed, col in zip(seeds, columns):
        if col is None:
            continue
        ids, vals = col
        focus_parts.append(ids)
        context_parts.append(np.full(ids.shape[0], seed, dtype=np.int64))
        weight_parts.append(vals)

    n = len(g.vocab)
    if not focus_parts:
        return SparseMatrix.empty(n)
    return SparseMatrix.from_coo(
        np.concatenate(focus_parts),
        np.concatenate(context_parts),
        np.concatenate(weight_parts),
        n,
    )
