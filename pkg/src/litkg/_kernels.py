"""Hot inner loops, JIT-compiled when numba is available.

Set ``LITKG_NO_NUMBA=1`` to force the pure-Python/numpy fallback. Both
paths run the same source, so results are identical; the fallback is just
interpreted. ``benchmarks/bench_kernels.py`` times the two side by side.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "LITKG_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit as _njit

        USE_NUMBA = True
    except ImportError:
        USE_NUMBA = False


def _bca_push_impl(indptr, targets, edge_preds, n_terms, seed, alpha, eps, credit_preds, weights):
    """Bookmark-coloring push with a max-paint-first queue.

    Paint 1.0 starts at the seed. Popping a node fixes ``alpha`` of its
    accumulated wet paint as score and pushes the rest along outgoing
    weights; paint entering a sink vanishes. Wet paint below ``eps`` is
    never processed (max-first order makes the first sub-eps pop a global
    stop). Ties on paint break toward the smaller term id, which makes the
    whole run deterministic.

    Returns (score, predicate_credit); the credit array is size 1 and
    unused when ``credit_preds`` is false.
    """
    score = np.zeros(n_terms, dtype=np.float64)
    if credit_preds:
        pred_credit = np.zeros(n_terms, dtype=np.float64)
    else:
        pred_credit = np.zeros(1, dtype=np.float64)
    resid = np.zeros(n_terms, dtype=np.float64)

    cap = 256
    heap_paint = np.zeros(cap, dtype=np.float64)
    heap_node = np.zeros(cap, dtype=np.int64)
    size = 0

    resid[seed] = 1.0
    heap_paint[0] = 1.0
    heap_node[0] = seed
    size = 1

    while size > 0:
        top_paint = heap_paint[0]
        top_node = heap_node[0]
        size -= 1
        heap_paint[0] = heap_paint[size]
        heap_node[0] = heap_node[size]
        i = 0
        while True:
            left = 2 * i + 1
            right = left + 1
            best = i
            if left < size and (
                heap_paint[left] > heap_paint[best]
                or (heap_paint[left] == heap_paint[best] and heap_node[left] < heap_node[best])
            ):
                best = left
            if right < size and (
                heap_paint[right] > heap_paint[best]
                or (heap_paint[right] == heap_paint[best] and heap_node[right] < heap_node[best])
            ):
                best = right
            if best == i:
                break
            tp = heap_paint[i]
            heap_paint[i] = heap_paint[best]
            heap_paint[best] = tp
            tn = heap_node[i]
            heap_node[i] = heap_node[best]
            heap_node[best] = tn
            i = best

        if top_paint != resid[top_node]:
            continue  # stale queue entry; a fresher one exists or the node was drained
        if top_paint < eps:
            break  # max-first order: every live parcel left is below eps too

        resid[top_node] = 0.0
        score[top_node] += alpha * top_paint
        flow = (1.0 - alpha) * top_paint
        for e in range(indptr[top_node], indptr[top_node + 1]):
            t = targets[e]
            parcel = flow * weights[e]
            if credit_preds:
                pred_credit[edge_preds[e]] += parcel
            new_resid = resid[t] + parcel
            resid[t] = new_resid

            if size >= heap_paint.shape[0]:
                new_cap = heap_paint.shape[0] * 2
                np_paint = np.zeros(new_cap, dtype=np.float64)
                np_node = np.zeros(new_cap, dtype=np.int64)
                np_paint[:size] = heap_paint[:size]
                np_node[:size] = heap_node[:size]
                heap_paint = np_paint
                heap_node = np_node
            j = size
            heap_paint[j] = new_resid
            heap_node[j] = t
            size += 1
            while j > 0:
                parent = (j - 1) // 2
                child_first = heap_paint[j] > heap_paint[parent] or (
                    heap_paint[j] == heap_paint[parent] and heap_node[j] < heap_node[parent]
                )
                if not child_first:
                    break
                tp = heap_paint[parent]
                heap_paint[parent] = heap_paint[j]
                heap_paint[j] = tp
                tn = heap_node[parent]
                heap_node[parent] = heap_node[j]
                heap_node[j] = tn
                j = parent

    return score, pred_credit


def _glove_epoch_impl(focus, context, log_x, f_weight, order, w, wt, b, bt,
                      gw, gwt, gb, gbt, lr):
    """One pass of AdaGrad updates over shuffled cells; returns epoch loss.

    The loss is accumulated per cell before its update, GloVe style. Both
    gradients of a cell are read before either side is written so the
    update order cannot bias them.
    """
    total = 0.0
    dims = w.shape[1]
    for k in range(order.shape[0]):
        c = order[k]
        i = focus[c]
        j = context[c]
        dot = b[i] + bt[j]
        for d in range(dims):
            dot += w[i, d] * wt[j, d]
        diff = dot - log_x[c]
        fw = f_weight[c]
        total += fw * diff * diff
        g = 2.0 * fw * diff
        for d in range(dims):
            gi = g * wt[j, d]
            gj = g * w[i, d]
            gw[i, d] += gi * gi
            gwt[j, d] += gj * gj
            w[i, d] -= lr * gi / np.sqrt(gw[i, d])
            wt[j, d] -= lr * gj / np.sqrt(gwt[j, d])
        gb[i] += g * g
        b[i] -= lr * g / np.sqrt(gb[i])
        gbt[j] += g * g
        bt[j] -= lr * g / np.sqrt(gbt[j])
    return total


if USE_NUMBA:
    bca_push = _njit(cache=True, nogil=True)(_bca_push_impl)
    glove_epoch = _njit(cache=True, nogil=True)(_glove_epoch_impl)
else:
    bca_push = _bca_push_impl
    glove_epoch = _glove_epoch_impl
