"""Times the two hot kernels, JIT-compiled vs interpreted.

Run: python3 benchmarks/bench_kernels.py
The interpreted path is the same source the JIT compiles, so this measures
compilation payoff only. Sizes are kept small enough that the interpreted
side finishes in seconds.
"""

import time

import numpy as np

from litkg._kernels import (
    USE_NUMBA,
    _bca_push_impl,
    _glove_epoch_impl,
    bca_push,
    glove_epoch,
)


def build_graph(rng, n, avg_degree):
    counts = rng.poisson(avg_degree, n).astype(np.int64)
    counts[counts == 0] = 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    targets = rng.integers(0, n, indptr[-1]).astype(np.int64)
    weights = np.empty(indptr[-1], dtype=np.float64)
    for i in range(n):
        weights[indptr[i]:indptr[i + 1]] = 1.0 / counts[i]
    preds = np.zeros(indptr[-1], dtype=np.int64)
    return indptr, targets, preds, weights


def time_bca(fn, indptr, targets, preds, weights, n, seeds):
    t0 = time.perf_counter()
    acc = 0.0
    for s in seeds:
        score, _ = fn(indptr, targets, preds, n, s, 0.15, 1e-6, False, weights)
        acc += score[s]
    return time.perf_counter() - t0, acc


def time_glove(fn, cells, arrays, epochs):
    focus, context, log_x, f_weight, order = cells
    state = [a.copy() for a in arrays]
    t0 = time.perf_counter()
    loss = 0.0
    for _ in range(epochs):
        loss = fn(focus, context, log_x, f_weight, order, *state, 0.05)
    return time.perf_counter() - t0, loss


def main():
    rng = np.random.default_rng(13)

    n = 3000
    indptr, targets, preds, weights = build_graph(rng, n, 8)
    seeds = rng.integers(0, n, 10)

    n_terms, nnz, dims = 800, 6000, 50
    focus = rng.integers(0, n_terms, nnz).astype(np.int64)
    context = rng.integers(0, n_terms, nnz).astype(np.int64)
    log_x = np.log(rng.random(nnz) * 50 + 1)
    f_weight = np.minimum((np.exp(log_x) / 100.0) ** 0.75, 1.0)
    order = rng.permutation(nnz).astype(np.int64)
    cells = (focus, context, log_x, f_weight, order)
    arrays = [
        (rng.random((n_terms, dims)) - 0.5) / dims,
        (rng.random((n_terms, dims)) - 0.5) / dims,
        (rng.random(n_terms) - 0.5) / dims,
        (rng.random(n_terms) - 0.5) / dims,
        np.ones((n_terms, dims)), np.ones((n_terms, dims)),
        np.ones(n_terms), np.ones(n_terms),
    ]

    if not USE_NUMBA:
        print("numba unavailable or disabled; both paths below are interpreted")
    else:
        # warm-up so compilation time stays out of the measurement
        time_bca(bca_push, indptr, targets, preds, weights, n, seeds[:1])
        time_glove(glove_epoch, cells, arrays, 1)

    jit_t, jit_acc = time_bca(bca_push, indptr, targets, preds, weights, n, seeds)
    py_t, py_acc = time_bca(_bca_push_impl, indptr, targets, preds, weights, n, seeds)
    assert jit_acc == py_acc
    print(f"bca_push     {len(seeds)} seeds, n={n}:  jit {jit_t:.3f}s  "
          f"interpreted {py_t:.3f}s  speedup {py_t / jit_t:.1f}x")

    epochs = 3
    jit_t, jit_loss = time_glove(glove_epoch, cells, arrays, epochs)
    py_t, py_loss = time_glove(_glove_epoch_impl, cells, arrays, epochs)
    assert jit_loss == py_loss
    print(f"glove_epoch  {epochs} epochs, nnz={nnz}, dims={dims}:  jit {jit_t:.3f}s  "
          f"interpreted {py_t:.3f}s  speedup {py_t / jit_t:.1f}x")


if __name__ == "__main__":
    main()
