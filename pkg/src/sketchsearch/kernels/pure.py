"""Pure numpy implementations of the hot kernels.

Twin of the compiled extension module `_core`; same signatures, same
semantics.  Selected at import time by the package when the extension is
unavailable (or forced via SKETCHSEARCH_BACKEND=pure).
"""

from __future__ import annotations

import math

import numpy as np

name = "pure"

_ROOT2 = math.sqrt(2.0)


def chamfer_batch(cloud: np.ndarray, bank: np.ndarray) -> np.ndarray:
    """Symmetric Chamfer distance between one point cloud and a bank of clouds.

    cloud: (p, 2); bank: (t, p, 2).  Returns (t,) distances, each the average
    of the two directional mean nearest-neighbor distances.
    """
    cloud = np.asarray(cloud, dtype=np.float64)
    bank = np.asarray(bank, dtype=np.float64)
    diff = bank[:, :, None, :] - cloud[None, None, :, :]
    d2 = (diff * diff).sum(axis=-1)  # (t, p_bank, p_cloud)
    fwd = np.sqrt(d2.min(axis=1)).mean(axis=1)  # cloud point -> nearest bank point
    back = np.sqrt(d2.min(axis=2)).mean(axis=1)  # bank point -> nearest cloud point
    return 0.5 * (fwd + back)


def _hungarian_min_cols(cost: np.ndarray) -> np.ndarray:
    """Shortest-augmenting-path assignment on an (n, m) cost matrix, n <= m.

    Returns p of length m+1 where p[j] is the 1-based row matched to column j
    (0 = unmatched).  Minimizes total cost; exact for any real costs.
    """
    n, m = cost.shape
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            cols = np.flatnonzero(~used[1:]) + 1
            cur = cost[i0 - 1, cols - 1] - u[i0] - v[cols]
            better = cur < minv[cols]
            minv[cols] = np.where(better, cur, minv[cols])
            way[cols[better]] = j0
            k = int(np.argmin(minv[cols]))
            j1 = int(cols[k])
            delta = minv[j1]
            used_idx = np.flatnonzero(used)
            u[p[used_idx]] += delta
            v[used_idx] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = int(way[j0])
            p[j0] = p[j1]
            j0 = j1
    return p


def assignment_max_weight(weights: np.ndarray) -> float:
    """Maximum-weight one-to-one assignment total for a nonnegative matrix."""
    w = np.ascontiguousarray(weights, dtype=np.float64)
    if w.size == 0:
        return 0.0
    n, m = w.shape
    if n > m:
        w = np.ascontiguousarray(w.T)
        n, m = m, n
    p = _hungarian_min_cols(-w)
    total = 0.0
    for j in range(1, m + 1):
        if p[j] != 0:
            total += w[p[j] - 1, j - 1]
    return total


def score_screens(
    masks: np.ndarray,
    el_cx: np.ndarray,
    el_cy: np.ndarray,
    el_w: np.ndarray,
    el_h: np.ndarray,
    offsets: np.ndarray,
    q_cat: np.ndarray,
    q_cx: np.ndarray,
    q_cy: np.ndarray,
    q_w: np.ndarray,
    q_h: np.ndarray,
    q_idf: np.ndarray,
    w_pos: float,
    w_shape: float,
) -> np.ndarray:
    """Raw assignment weight of every screen against one query.

    Screens are contiguous element ranges offsets[s]..offsets[s+1] into the
    flat element arrays; masks carry one bit per query category.  Returns the
    un-normalized maximum-weight assignment total per screen.
    """
    nq = len(q_cat)
    n_screens = len(offsets) - 1
    scores = np.zeros(n_screens)
    if nq == 0 or len(masks) == 0:
        return scores

    rows = np.empty((nq, len(masks)))
    for i in range(nq):
        compat = (masks & np.uint32(1 << int(q_cat[i]))) != 0
        dx = el_cx - q_cx[i]
        dy = el_cy - q_cy[i]
        pos = 1.0 - np.sqrt(dx * dx + dy * dy) / _ROOT2
        np.maximum(pos, 0.0, out=pos)
        shape = (np.minimum(el_w, q_w[i]) / np.maximum(el_w, q_w[i])) * (
            np.minimum(el_h, q_h[i]) / np.maximum(el_h, q_h[i])
        )
        rows[i] = np.where(compat, q_idf[i] * (w_pos * pos + w_shape * shape), 0.0)

    # Sum of per-row maxima is an upper bound on any matching; when the
    # argmax columns are distinct the bound is attained, so the exact solver
    # is only needed for screens with contested elements.
    row_idx = np.arange(nq)
    for s in range(n_screens):
        a = int(offsets[s])
        b = int(offsets[s + 1])
        if a == b:
            continue
        sub = rows[:, a:b]
        best_cols = sub.argmax(axis=1)
        best_vals = sub[row_idx, best_cols]
        positive = best_vals > 0.0
        if not positive.any():
            continue
        cols = best_cols[positive]
        if len(set(cols.tolist())) == len(cols):
            total = 0.0
            for val in best_vals:
                if val > 0.0:
                    total += float(val)
            scores[s] = total
        else:
            scores[s] = assignment_max_weight(sub)
    return scores
