import numpy as np
import pytest

from conftest import make_graph, random_edges
from litkg import (
    Direction,
    PprParams,
    SeedNotFound,
    TermKind,
    bca_ppr,
    build_adjacency,
    graph_cooccurrence,
)
from litkg._kernels import _bca_push_impl, bca_push
from oracles import desk_paint_trace, power_iteration_ppr


def scores(g, seed, alpha, eps):
    view = build_adjacency(g, Direction.FORWARD)
    return bca_ppr(view, seed, PprParams(restart_alpha=alpha, epsilon=eps)).as_dict()


def test_oracle_matches_closed_form_cycle():
    # validates the oracle itself: sum of alpha(1-alpha)^(2k) = 2/3 at alpha=0.5
    x = power_iteration_ppr(2, [(0, 1), (1, 0)], seed=0, alpha=0.5)
    assert abs(x[0] - 2 / 3) <= 1e-12
    assert abs(x[1] - 1 / 3) <= 1e-12


def test_single_node_keeps_half():
    g, ids = make_graph(1, [])
    assert scores(g, ids[0], 0.5, 1e-12) == {ids[0]: 0.5}


def test_two_node_cycle_closed_form():
    g, ids = make_graph(2, [(0, 1), (1, 0)])
    got = scores(g, ids[0], 0.5, 1e-12)
    assert abs(got[ids[0]] - 2 / 3) <= 1e-9
    assert abs(got[ids[1]] - 1 / 3) <= 1e-9


def test_chain_truncation_desk_trace():
    # seed pops 1.0 (keep 0.5, push 0.5); b pops 0.5 >= 0.3 (keep 0.25,
    # push 0.25); c pops 0.25 < 0.3 and is discarded.
    g, ids = make_graph(3, [(0, 1), (1, 2)])
    a, b, c = ids
    got = scores(g, a, 0.5, 0.3)
    assert got == {a: 0.5, b: 0.25}
    desk = desk_paint_trace({a: [(b, 1.0)], b: [(c, 1.0)]}, a, 0.5, 0.3)
    assert desk == got


def test_matches_desk_trace_on_random_graphs():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(2, 12))
        edges = random_edges(rng, n, 0.3)
        g, ids = make_graph(n, edges)
        view = build_adjacency(g, Direction.FORWARD)
        out = {}
        for node in range(n):
            lo, hi = view.indptr[node], view.indptr[node + 1]
            out[node] = list(zip(view.targets[lo:hi].tolist(), view.weights[lo:hi].tolist()))
        seed = int(rng.integers(0, n))
        eps = float(rng.choice([1e-2, 1e-3, 1e-4]))
        got = scores(g, ids[seed], 0.15, eps)
        desk = desk_paint_trace(out, seed, 0.15, eps)
        assert set(got) == set(desk)
        for k in got:
            assert got[k] == pytest.approx(desk[k], abs=1e-12)


def test_power_iteration_equivalence_small():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(2, 25))
        edges = random_edges(rng, n, 0.2)
        g, ids = make_graph(n, edges)
        seed = int(rng.integers(0, n))
        got = scores(g, ids[seed], 0.15, 1e-8)
        want = power_iteration_ppr(n, edges, seed, 0.15)
        dense = np.zeros(n)
        for k, val in got.items():
            dense[k] = val
        assert np.abs(dense - want).sum() <= 5 * 1e-8 * n


def test_monotone_refinement():
    rng = np.random.default_rng(17)
    for _ in range(10):
        n = int(rng.integers(3, 15))
        g, ids = make_graph(n, random_edges(rng, n, 0.25))
        seed = ids[int(rng.integers(0, n))]
        prev = {}
        for eps in (1e-2, 1e-3, 1e-4, 1e-5):
            cur = scores(g, seed, 0.15, eps)
            for k, val in prev.items():
                assert cur.get(k, 0.0) >= val - 1e-15
            prev = cur


def test_scores_positive_and_bounded():
    rng = np.random.default_rng(19)
    for _ in range(10):
        n = int(rng.integers(2, 20))
        g, ids = make_graph(n, random_edges(rng, n, 0.2))
        sv = bca_ppr(
            build_adjacency(g, Direction.FORWARD),
            ids[0],
            PprParams(restart_alpha=0.15, epsilon=1e-6),
        )
        assert np.all(sv.values > 0)
        assert sv.total <= 1.0 + 1e-12


def test_deterministic_bit_identical():
    g, ids = make_graph(10, random_edges(np.random.default_rng(23), 10, 0.3))
    view = build_adjacency(g, Direction.FORWARD)
    params = PprParams(restart_alpha=0.15, epsilon=1e-7)
    a = bca_ppr(view, ids[2], params)
    b = bca_ppr(view, ids[2], params)
    assert np.array_equal(a.ids, b.ids)
    assert np.array_equal(a.values, b.values)


def test_seed_not_found():
    g, _ = make_graph(2, [(0, 1)])
    with pytest.raises(SeedNotFound):
        bca_ppr(build_adjacency(g, Direction.FORWARD), 99, PprParams())


def test_kernel_paths_agree_bitwise():
    g, _ = make_graph(15, random_edges(np.random.default_rng(29), 15, 0.25))
    view = build_adjacency(g, Direction.FORWARD)
    args = (
        view.indptr, view.targets, view.edge_predicates, view.n_terms,
        3, 0.15, 1e-7, False, view.weights,
    )
    fast_scores, fast_credit = bca_push(*args)
    slow_scores, slow_credit = _bca_push_impl(*args)
    assert np.array_equal(fast_scores, slow_scores)
    assert np.array_equal(fast_credit, slow_credit)


# ------------------------------------------------- matrix assembly

def test_single_edge_columns():
    g, ids = make_graph(2, [(0, 1)])
    m = graph_cooccurrence(g, PprParams(restart_alpha=0.5, epsilon=1e-9))
    a, b = ids
    assert m.to_dict() == {(b, a): 1.0, (a, b): 1.0}


def test_empty_graph_gives_empty_matrix():
    g, _ = make_graph(0, [])
    assert graph_cooccurrence(g, PprParams()).nnz == 0


def test_columns_sum_to_one_without_seed_diagonal():
    rng = np.random.default_rng(37)
    g, ids = make_graph(12, random_edges(rng, 12, 0.3))
    m = graph_cooccurrence(g, PprParams(restart_alpha=0.15, epsilon=1e-7))
    sums = m.column_sums()
    for e in ids:
        if sums[e] > 0:
            assert abs(sums[e] - 1.0) <= 1e-9
    assert all(f != c for f, c in zip(m.focus, m.context))


def test_columns_match_two_direction_oracle():
    rng = np.random.default_rng(41)
    n = 4
    edges = random_edges(rng, n, 0.4) or [(0, 1)]
    g, ids = make_graph(n, edges)
    eps = 1e-8
    m = graph_cooccurrence(g, PprParams(restart_alpha=0.15, epsilon=eps))
    cols = m.to_dict()
    rev = [(t, s) for s, t in edges]
    for seed in range(n):
        fwd = power_iteration_ppr(n, edges, seed, 0.15)
        bwd = power_iteration_ppr(n, rev, seed, 0.15)
        combined = fwd + bwd
        combined[seed] = 0.0
        if combined.sum() == 0:
            continue
        combined /= combined.sum()
        got = np.zeros(n)
        for node in range(n):
            got[node] = cols.get((node, ids[seed]), 0.0)
        assert np.abs(got - combined).sum() <= 5 * eps * n


def test_predicate_crediting():
    g, ids = make_graph(2, [(0, 1)])
    pid = g.vocab.id_of("http://x/p")
    m = graph_cooccurrence(g, PprParams(restart_alpha=0.5, epsilon=1e-9, include_predicates=True))
    cols = m.to_dict()
    a, b = ids
    # column a: pushed 0.5 along the edge, kept 0.25 at b; predicate got 0.5
    assert cols[(pid, a)] == pytest.approx(0.5 / 0.75)
    assert cols[(b, a)] == pytest.approx(0.25 / 0.75)
    assert (pid, b) in cols


def test_threading_matches_sequential():
    g, _ = make_graph(20, random_edges(np.random.default_rng(43), 20, 0.2))
    params = PprParams(restart_alpha=0.15, epsilon=1e-6)
    one = graph_cooccurrence(g, params, threads=1)
    four = graph_cooccurrence(g, params, threads=4)
    assert one.to_dict() == four.to_dict()
