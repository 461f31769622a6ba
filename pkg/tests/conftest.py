import pathlib

import numpy as np
import pytest

from litkg import KnowledgeGraph, TermKind, Vocabulary

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def toy_nt_path() -> pathlib.Path:
    return DATA_DIR / "toy_graph.nt"


def make_graph(n_entities: int, edges: list[tuple[int, int]], predicate: str = "http://x/p"):
    """Graph over entities e0..e(n-1) with one shared predicate."""
    v = Vocabulary()
    ids = [v.intern(f"http://x/e{i}", TermKind.ENTITY) for i in range(n_entities)]
    pid = v.intern(predicate, TermKind.PREDICATE)
    subs = np.array([ids[s] for s, _ in edges], dtype=np.int64)
    objs = np.array([ids[t] for _, t in edges], dtype=np.int64)
    preds = np.full(len(edges), pid, dtype=np.int64)
    g = KnowledgeGraph(vocab=v, subjects=subs, predicates=preds, objects=objs, literals={})
    return g, ids


def random_edges(rng: np.random.Generator, n: int, density: float) -> list[tuple[int, int]]:
    """Directed edges without self-loops, each pair kept with p=density."""
    edges = []
    for s in range(n):
        for t in range(n):
            if s != t and rng.random() < density:
                edges.append((s, t))
    return edges
