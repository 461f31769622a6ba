"""Row-stochastic adjacency views over the knowledge graph.

The reversed view flips every edge while keeping its predicate, so random
walks can score both successors and predecessors of a seed. Edge weights
default to 1/outdegree with parallel edges counted separately; a weight
hook can assign non-uniform pre-normalization weights per edge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rdf import KnowledgeGraph


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSED = "reversed"


@dataclass(frozen=True)
class AdjacencyView:
    """CSR adjacency over all vocabulary ids; non-node ids are sinks."""

    direction: Direction
    indptr: np.ndarray    # int64, len n_terms + 1
    targets: np.ndarray   # int64, len nnz
    edge_predicates: np.ndarray  # int64, len nnz
    weights: np.ndarray   # float64, len nnz; rows sum to 1 or are empty

    @property
    def n_terms(self) -> int:
        return int(self.indptr.shape[0] - 1)

    def out_neighbors(self, node: int) -> list[tuple[int, int, float]]:
        lo, hi = int(self.indptr[node]), int(self.indptr[node + 1])
        return [
            (int(self.targets[e]), int(self.edge_predicates[e]), float(self.weights[e]))
            for e in range(lo, hi)
        ]


WeightFn = Callable[[int, int, int], float]


def build_adjacency(
    g: KnowledgeGraph,
    direction: Direction = Direction.FORWARD,
    weight_fn: WeightFn | None = None,
) -> AdjacencyView:
    """Build the per-node normalized outgoing edge lists.

    ``weight_fn(subject, predicate, object)`` supplies raw positive edge
    weights before row normalization; default is one unit per edge.
    """
    n = len(g.vocab)
    if direction is Direction.FORWARD:
        src, dst = g.subjects, g.objects
    else:
        src, dst = g.objects, g.subjects
    preds = g.predicates

    m = src.shape[0]
    if weight_fn is None:
        raw = np.ones(m, dtype=np.float64)
    else:
        raw = np.array(
            [weight_fn(int(s), int(p), int(o))
             for s, p, o in zip(g.subjects, g.predicates, g.objects)],
            dtype=np.float64,
        )
        if m and raw.min() <= 0:
            raise ValueError("edge weights must be positive")

    order = np.argsort(src, kind="stable")
    src_s = src[order]
    counts = np.bincount(src_s, minlength=n) if m else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])

    targets = dst[order].astype(np.int64, copy=True)
    edge_preds = preds[order].astype(np.int64, copy=True)
    weights = raw[order]
    row_sums = np.bincount(src_s, weights=weights, minlength=n) if m else np.zeros(n)
    with np.errstate(invalid="ignore"):
        weights = weights / row_sums[src_s]

    return AdjacencyView(
        direction=direction,
        indptr=indptr,
        targets=targets,
        edge_predicates=edge_preds,
        weights=weights,
    )
