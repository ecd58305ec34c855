# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twins of the pure-numpy kernels (see pure.py).

Same signatures, same arithmetic, same tie-breaking; the pure module is the
readable reference, this one exists for the hot paths (corpus-wide scoring
and template matching).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

name = "compiled"

cdef double ROOT2 = sqrt(2.0)


def chamfer_batch(cloud, bank):
    """Symmetric Chamfer distance between one point cloud and a bank of clouds.

    cloud: (p, 2); bank: (t, p, 2).  Returns (t,) distances, each the average
    of the two directional mean nearest-neighbor distances.
    """
    cdef double[:, ::1] c = np.ascontiguousarray(cloud, dtype=np.float64)
    cdef double[:, :, ::1] b = np.ascontiguousarray(bank, dtype=np.float64)
    cdef Py_ssize_t pc = c.shape[0]
    cdef Py_ssize_t t = b.shape[0]
    cdef Py_ssize_t pb = b.shape[1]
    out_arr = np.empty(t, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t ti, i, k
    cdef double dx, dy, d2, dmin, acc_f, acc_b
    with nogil:
        for ti in range(t):
            acc_f = 0.0
            for k in range(pc):
                dmin = INFINITY
                for i in range(pb):
                    dx = b[ti, i, 0] - c[k, 0]
                    dy = b[ti, i, 1] - c[k, 1]
                    d2 = dx * dx + dy * dy
                    if d2 < dmin:
                        dmin = d2
                acc_f += sqrt(dmin)
            acc_b = 0.0
            for i in range(pb):
                dmin = INFINITY
                for k in range(pc):
                    dx = b[ti, i, 0] - c[k, 0]
                    dy = b[ti, i, 1] - c[k, 1]
                    d2 = dx * dx + dy * dy
                    if d2 < dmin:
                        dmin = d2
                acc_b += sqrt(dmin)
            out[ti] = 0.5 * (acc_f / pc + acc_b / pb)
    return out_arr


cdef void _hungarian(
    const double* cost,
    Py_ssize_t n,
    Py_ssize_t m,
    long long* p,
    long long* way,
    double* u,
    double* v,
    double* minv,
    unsigned char* used,
) noexcept nogil:
    """Shortest-augmenting-path assignment, n <= m, 1-based bookkeeping.

    Fills p[1..m] with the matched row (0 = unmatched); minimizes total cost.
    """
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur
    for j in range(m + 1):
        p[j] = 0
        v[j] = 0.0
        way[j] = 0
    for i in range(n + 1):
        u[i] = 0.0
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        for j in range(m + 1):
            minv[j] = INFINITY
            used[j] = 0
        while True:
            used[j0] = 1
            i0 = p[j0]
            delta = INFINITY
            j1 = 0
            for j in range(1, m + 1):
                if not used[j]:
                    cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1


def assignment_max_weight(weights):
    """Maximum-weight one-to-one assignment total for a nonnegative matrix."""
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    if w_arr.size == 0:
        return 0.0
    if w_arr.shape[0] > w_arr.shape[1]:
        w_arr = np.ascontiguousarray(w_arr.T)
    cdef double[:, ::1] w = w_arr
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t m = w.shape[1]
    cost_arr = np.empty(n * m, dtype=np.float64)
    cdef double[::1] cost = cost_arr
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            cost[i * m + j] = -w[i, j]
    p_arr = np.zeros(m + 1, dtype=np.int64)
    way_arr = np.zeros(m + 1, dtype=np.int64)
    u_arr = np.zeros(n + 1, dtype=np.float64)
    v_arr = np.zeros(m + 1, dtype=np.float64)
    minv_arr = np.zeros(m + 1, dtype=np.float64)
    used_arr = np.zeros(m + 1, dtype=np.uint8)
    cdef long long[::1] p = p_arr
    cdef long long[::1] way = way_arr
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double[::1] minv = minv_arr
    cdef unsigned char[::1] used = used_arr
    with nogil:
        _hungarian(&cost[0], n, m, &p[0], &way[0], &u[0], &v[0], &minv[0], &used[0])
    cdef double total = 0.0
    for j in range(1, m + 1):
        if p[j] != 0:
            total += w[p[j] - 1, j - 1]
    return total


def score_screens(
    masks,
    el_cx,
    el_cy,
    el_w,
    el_h,
    offsets,
    q_cat,
    q_cx,
    q_cy,
    q_w,
    q_h,
    q_idf,
    double w_pos,
    double w_shape,
):
    """Raw assignment weight of every screen against one query.

    Screens are contiguous element ranges offsets[s]..offsets[s+1] into the
    flat element arrays; masks carry one bit per query category.  Returns the
    un-normalized maximum-weight assignment total per screen.
    """
    cdef cnp.uint32_t[::1] mk = np.ascontiguousarray(masks, dtype=np.uint32)
    cdef double[::1] ecx = np.ascontiguousarray(el_cx, dtype=np.float64)
    cdef double[::1] ecy = np.ascontiguousarray(el_cy, dtype=np.float64)
    cdef double[::1] ew = np.ascontiguousarray(el_w, dtype=np.float64)
    cdef double[::1] eh = np.ascontiguousarray(el_h, dtype=np.float64)
    cdef long long[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef long long[::1] qc = np.ascontiguousarray(q_cat, dtype=np.int64)
    cdef double[::1] qcx = np.ascontiguousarray(q_cx, dtype=np.float64)
    cdef double[::1] qcy = np.ascontiguousarray(q_cy, dtype=np.float64)
    cdef double[::1] qw = np.ascontiguousarray(q_w, dtype=np.float64)
    cdef double[::1] qh = np.ascontiguousarray(q_h, dtype=np.float64)
    cdef double[::1] qidf = np.ascontiguousarray(q_idf, dtype=np.float64)

    cdef Py_ssize_t nq = qc.shape[0]
    cdef Py_ssize_t n_screens = off.shape[0] - 1
    scores_arr = np.zeros(n_screens, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    if nq == 0 or mk.shape[0] == 0:
        return scores_arr

    cdef Py_ssize_t emax = 0, s, a, b, e
    for s in range(n_screens):
        if off[s + 1] - off[s] > emax:
            emax = off[s + 1] - off[s]
    if emax == 0:
        return scores_arr

    cdef Py_ssize_t mdim = emax if emax > nq else nq
    sub_arr = np.empty(nq * emax, dtype=np.float64)
    cost_arr = np.empty(nq * emax, dtype=np.float64)
    rowcol_arr = np.empty(nq, dtype=np.int64)
    rowval_arr = np.empty(nq, dtype=np.float64)
    colmark_arr = np.zeros(emax, dtype=np.uint8)
    p_arr = np.zeros(mdim + 1, dtype=np.int64)
    way_arr = np.zeros(mdim + 1, dtype=np.int64)
    u_arr = np.zeros(mdim + 1, dtype=np.float64)
    v_arr = np.zeros(mdim + 1, dtype=np.float64)
    minv_arr = np.zeros(mdim + 1, dtype=np.float64)
    used_arr = np.zeros(mdim + 1, dtype=np.uint8)
    cdef double[::1] sub = sub_arr
    cdef double[::1] cost = cost_arr
    cdef long long[::1] rowcol = rowcol_arr
    cdef double[::1] rowval = rowval_arr
    cdef unsigned char[::1] colmark = colmark_arr
    cdef long long[::1] p = p_arr
    cdef long long[::1] way = way_arr
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double[::1] minv = minv_arr
    cdef unsigned char[::1] used = used_arr

    cdef Py_ssize_t i, j, n, m
    cdef cnp.uint32_t bit
    cdef double dx, dy, pos, shape, val, best, total
    cdef bint any_pos, distinct
    with nogil:
        for s in range(n_screens):
            a = off[s]
            b = off[s + 1]
            e = b - a
            if e == 0:
                continue
            any_pos = False
            for i in range(nq):
                bit = (<cnp.uint32_t>1) << qc[i]
                best = -INFINITY
                for j in range(e):
                    if mk[a + j] & bit:
                        dx = ecx[a + j] - qcx[i]
                        dy = ecy[a + j] - qcy[i]
                        pos = 1.0 - sqrt(dx * dx + dy * dy) / ROOT2
                        if pos < 0.0:
                            pos = 0.0
                        shape = (
                            (ew[a + j] if ew[a + j] < qw[i] else qw[i])
                            / (ew[a + j] if ew[a + j] > qw[i] else qw[i])
                        ) * (
                            (eh[a + j] if eh[a + j] < qh[i] else qh[i])
                            / (eh[a + j] if eh[a + j] > qh[i] else qh[i])
                        )
                        val = qidf[i] * (w_pos * pos + w_shape * shape)
                    else:
                        val = 0.0
                    sub[i * e + j] = val
                    if val > best:
                        best = val
                        rowcol[i] = j
                rowval[i] = best
                if best > 0.0:
                    any_pos = True
            if not any_pos:
                continue
            distinct = True
            for i in range(nq):
                if rowval[i] > 0.0:
                    if colmark[rowcol[i]]:
                        distinct = False
                    colmark[rowcol[i]] = 1
            for i in range(nq):
                if rowval[i] > 0.0:
                    colmark[rowcol[i]] = 0
            if distinct:
                total = 0.0
                for i in range(nq):
                    if rowval[i] > 0.0:
                        total += rowval[i]
                scores[s] = total
            else:
                # exact solve on the contested screen; cost = -sub, with the
                # matrix transposed when queries outnumber elements
                if nq <= e:
                    n = nq
                    m = e
                    for i in range(n):
                        for j in range(m):
                            cost[i * m + j] = -sub[i * e + j]
                else:
                    n = e
                    m = nq
                    for i in range(m):
                        for j in range(n):
                            cost[j * m + i] = -sub[i * e + j]
                _hungarian(&cost[0], n, m, &p[0], &way[0], &u[0], &v[0], &minv[0], &used[0])
                total = 0.0
                for j in range(1, m + 1):
                    if p[j] != 0:
                        total += -cost[(p[j] - 1) * m + (j - 1)]
                scores[s] = total
    return scores_arr
