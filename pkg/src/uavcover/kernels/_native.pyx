# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: minimum enclosing circle, greedy disk filtering,
coverage tests, the correction sweep, and candidate coverage-row generation.

Must stay semantically identical to `_fallback` (ordering, tie-breaking,
tolerances); the parity test suite compares both backends.
"""

from libc.math cimport sqrt
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double CONTAIN_EPS = 3e-14


cdef inline bint _in_circle(double cx, double cy, double r2, double x, double y) nogil:
    cdef double dx = x - cx
    cdef double dy = y - cy
    return dx * dx + dy * dy <= r2 * (1.0 + CONTAIN_EPS) + 1e-300


cdef inline void _diameter_circle(double ax, double ay, double bx, double by,
                                  double* ocx, double* ocy, double* or2) nogil:
    cdef double cx = 0.5 * (ax + bx)
    cdef double cy = 0.5 * (ay + by)
    cdef double dx = ax - cx
    cdef double dy = ay - cy
    cdef double d1 = dx * dx + dy * dy
    dx = bx - cx
    dy = by - cy
    cdef double d2 = dx * dx + dy * dy
    ocx[0] = cx
    ocy[0] = cy
    or2[0] = d1 if d1 > d2 else d2


cdef inline bint _circumcircle(double ax, double ay, double bx, double by,
                               double cx, double cy,
                               double* ocx, double* ocy, double* or2) nogil:
    cdef double bx_ = bx - ax
    cdef double by_ = by - ay
    cdef double cx_ = cx - ax
    cdef double cy_ = cy - ay
    cdef double d = 2.0 * (bx_ * cy_ - by_ * cx_)
    if d == 0.0:
        return 0
    cdef double b2 = bx_ * bx_ + by_ * by_
    cdef double c2 = cx_ * cx_ + cy_ * cy_
    cdef double ux = (cy_ * b2 - by_ * c2) / d
    cdef double uy = (bx_ * c2 - cx_ * b2) / d
    ocx[0] = ax + ux
    ocy[0] = ay + uy
    or2[0] = ux * ux + uy * uy
    return 1


cdef void _mec_two_fixed(double* xs, double* ys, Py_ssize_t m,
                         double px, double py, double qx, double qy,
                         double* ocx, double* ocy, double* or2) nogil:
    cdef double ccx, ccy, cr2
    _diameter_circle(px, py, qx, qy, &ccx, &ccy, &cr2)
    cdef bint have_left = 0, have_right = 0
    cdef double lcx = 0, lcy = 0, lr2 = 0, lcross = 0
    cdef double rcx = 0, rcy = 0, rr2 = 0, rcross = 0
    cdef double abx = qx - px
    cdef double aby = qy - py
    cdef Py_ssize_t k
    cdef double x, y, cross, ucx, ucy, ur2, ccross
    for k in range(m):
        x = xs[k]
        y = ys[k]
        if _in_circle(ccx, ccy, cr2, x, y):
            continue
        cross = abx * (y - py) - aby * (x - px)
        if not _circumcircle(px, py, qx, qy, x, y, &ucx, &ucy, &ur2):
            continue
        ccross = abx * (ucy - py) - aby * (ucx - px)
        if cross > 0.0 and (not have_left or ccross > lcross):
            lcx = ucx; lcy = ucy; lr2 = ur2; lcross = ccross; have_left = 1
        elif cross < 0.0 and (not have_right or ccross < rcross):
            rcx = ucx; rcy = ucy; rr2 = ur2; rcross = ccross; have_right = 1
    if not have_left and not have_right:
        ocx[0] = ccx; ocy[0] = ccy; or2[0] = cr2
    elif not have_left:
        ocx[0] = rcx; ocy[0] = rcy; or2[0] = rr2
    elif not have_right:
        ocx[0] = lcx; ocy[0] = lcy; or2[0] = lr2
    elif lr2 <= rr2:
        ocx[0] = lcx; ocy[0] = lcy; or2[0] = lr2
    else:
        ocx[0] = rcx; ocy[0] = rcy; or2[0] = rr2


cdef void _mec_one_fixed(double* xs, double* ys, Py_ssize_t m,
                         double px, double py,
                         double* ocx, double* ocy, double* or2) nogil:
    cdef double ccx = px, ccy = py, cr2 = 0.0
    cdef Py_ssize_t k
    cdef double x, y
    for k in range(m):
        x = xs[k]
        y = ys[k]
        if _in_circle(ccx, ccy, cr2, x, y):
            continue
        if cr2 == 0.0:
            _diameter_circle(px, py, x, y, &ccx, &ccy, &cr2)
        else:
            _mec_two_fixed(xs, ys, k + 1, px, py, x, y, &ccx, &ccy, &cr2)
    ocx[0] = ccx
    ocy[0] = ccy
    or2[0] = cr2


cdef void _mec_core(double* xs, double* ys, Py_ssize_t n,
                    double* ocx, double* ocy, double* or2) nogil:
    cdef double ccx = xs[0], ccy = ys[0], cr2 = 0.0
    cdef Py_ssize_t i
    for i in range(1, n):
        if not _in_circle(ccx, ccy, cr2, xs[i], ys[i]):
            _mec_one_fixed(xs, ys, i, xs[i], ys[i], &ccx, &ccy, &cr2)
    ocx[0] = ccx
    ocy[0] = ccy
    or2[0] = cr2


cdef void _fill_shuffled(const double[:, ::1] pts, double* xs, double* ys) nogil:
    # Deterministic Fisher-Yates via a fixed LCG, matching the fallback backend.
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, j
    cdef unsigned long long state = (<unsigned long long> n * 2654435761ULL + 1013904223ULL) & 0xFFFFFFFFULL
    for i in range(n):
        xs[i] = pts[i, 0]
        ys[i] = pts[i, 1]
    cdef double tx, ty
    for i in range(n - 1, 0, -1):
        state = (state * 1664525ULL + 1013904223ULL) & 0xFFFFFFFFULL
        j = <Py_ssize_t> (state % <unsigned long long> (i + 1))
        tx = xs[i]; xs[i] = xs[j]; xs[j] = tx
        ty = ys[i]; ys[i] = ys[j]; ys[j] = ty


def mec(points):
    """Minimum enclosing circle of an (n, 2) array -> (cx, cy, radius)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    cdef double* xs = <double*> malloc(n * sizeof(double))
    cdef double* ys = <double*> malloc(n * sizeof(double))
    if xs == NULL or ys == NULL:
        free(xs); free(ys)
        raise MemoryError()
    cdef double ccx, ccy, cr2
    try:
        _fill_shuffled(pts, xs, ys)
        _mec_core(xs, ys, n, &ccx, &ccy, &cr2)
    finally:
        free(xs)
        free(ys)
    return ccx, ccy, sqrt(cr2)


def covered_mask(points, double cx, double cy, double radius, double rtol):
    """Boolean mask of points within radius*(1+rtol) of (cx, cy)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n, dtype=np.uint8)
    cdef double rr = radius * (1.0 + rtol)
    cdef double rr2 = rr * rr
    cdef Py_ssize_t i
    cdef double dx, dy
    for i in range(n):
        dx = pts[i, 0] - cx
        dy = pts[i, 1] - cy
        if dx * dx + dy * dy <= rr2:
            out[i] = 1
    return out.view(np.bool_)


def coverage_count(points, centers, double radius, double rtol):
    """Count points within radius*(1+rtol) of at least one center."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cen = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t k = cen.shape[0]
    if n == 0 or k == 0:
        return 0
    cdef double rr = radius * (1.0 + rtol)
    cdef double rr2 = rr * rr
    cdef Py_ssize_t i, j
    cdef long count = 0
    cdef double dx, dy
    with nogil:
        for i in range(n):
            for j in range(k):
                dx = pts[i, 0] - cen[j, 0]
                dy = pts[i, 1] - cen[j, 1]
                if dx * dx + dy * dy <= rr2:
                    count += 1
                    break
    return count


def correct_sweep(coords, double epsilon):
    """Greedy first-pop merge: pivot + strictly-closer-than-epsilon neighbours
    collapse to their mean, in input order. Returns an (L, 2) array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(coords, dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0]
    if m == 0:
        return np.empty((0, 2), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, 2), dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] alive = np.ones(m, dtype=np.uint8)
    cdef double e2 = epsilon * epsilon
    cdef Py_ssize_t i, j, nout = 0
    cdef double sx, sy, dx, dy
    cdef long cnt
    with nogil:
        for i in range(m):
            if not alive[i]:
                continue
            alive[i] = 0
            sx = pts[i, 0]
            sy = pts[i, 1]
            cnt = 1
            for j in range(m):
                if not alive[j]:
                    continue
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                if dx * dx + dy * dy < e2:
                    alive[j] = 0
                    sx += pts[j, 0]
                    sy += pts[j, 1]
                    cnt += 1
            out[nout, 0] = sx / cnt
            out[nout, 1] = sy / cnt
            nout += 1
    return out[:nout].copy()


def greedy_mec_filter(cands, double radius, double rtol):
    """Spiral inner step: scan candidates in order (first one is the pivot and
    always kept), keeping each whose inclusion leaves the MEC radius within
    radius*(1+rtol). Returns (cx, cy, mec_radius, n_selected)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(cands, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    if n == 0:
        raise ValueError("empty candidate set")
    cdef double limit = radius * (1.0 + rtol)
    cdef double limit2 = limit * limit
    cdef double* xs = <double*> malloc(n * sizeof(double))
    cdef double* ys = <double*> malloc(n * sizeof(double))
    if xs == NULL or ys == NULL:
        free(xs); free(ys)
        raise MemoryError()
    cdef Py_ssize_t nsel = 1
    cdef double ccx, ccy, cr2, ncx, ncy, nr2, x, y
    cdef Py_ssize_t i
    try:
        with nogil:
            xs[0] = pts[0, 0]
            ys[0] = pts[0, 1]
            ccx = xs[0]
            ccy = ys[0]
            cr2 = 0.0
            for i in range(1, n):
                x = pts[i, 0]
                y = pts[i, 1]
                if _in_circle(ccx, ccy, cr2, x, y):
                    xs[nsel] = x
                    ys[nsel] = y
                    nsel += 1
                    continue
                _mec_one_fixed(xs, ys, nsel, x, y, &ncx, &ncy, &nr2)
                if nr2 <= limit2:
                    xs[nsel] = x
                    ys[nsel] = y
                    nsel += 1
                    ccx = ncx
                    ccy = ncy
                    cr2 = nr2
    finally:
        free(xs)
        free(ys)
    return ccx, ccy, sqrt(cr2), nsel


def candidate_rows(points, double radius, double rtol):
    """Candidate disk centers and their bit-packed coverage rows.

    Candidates: every input point, then for each pair (i<j) closer than 2r the
    two radius-r circle intersection points (+normal side first). Row bit k of
    word w covers point index w*64+k. Returns (centers (m,2), rows (m,W) uint64).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    if n == 0:
        return np.empty((0, 2), dtype=np.float64), np.empty((0, 0), dtype=np.uint64)
    cdef double r = radius
    cdef double four_r2 = 4.0 * r * r
    cdef Py_ssize_t i, j
    cdef double dx, dy, d2
    cdef Py_ssize_t npairs = 0
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                d2 = dx * dx + dy * dy
                if d2 <= four_r2 and d2 > 1e-24:
                    npairs += 1
    cdef Py_ssize_t m = n + 2 * npairs
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cands = np.empty((m, 2), dtype=np.float64)
    cdef Py_ssize_t c = 0
    cdef double d, h, mx, my, nx, ny
    with nogil:
        for i in range(n):
            cands[c, 0] = pts[i, 0]
            cands[c, 1] = pts[i, 1]
            c += 1
        for i in range(n):
            for j in range(i + 1, n):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                d2 = dx * dx + dy * dy
                if d2 > four_r2 or d2 <= 1e-24:
                    continue
                d = sqrt(d2)
                h = r * r - 0.25 * d2
                h = sqrt(h) if h > 0.0 else 0.0
                mx = 0.5 * (pts[i, 0] + pts[j, 0])
                my = 0.5 * (pts[i, 1] + pts[j, 1])
                nx = -dy / d
                ny = dx / d
                cands[c, 0] = mx + h * nx
                cands[c, 1] = my + h * ny
                c += 1
                cands[c, 0] = mx - h * nx
                cands[c, 1] = my - h * ny
                c += 1
    cdef Py_ssize_t words = (n + 63) // 64
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] rows = np.zeros((m, words), dtype=np.uint64)
    cdef double rr = r * (1.0 + rtol)
    cdef double rr2 = rr * rr
    cdef Py_ssize_t k
    with nogil:
        for c in range(m):
            for k in range(n):
                dx = pts[k, 0] - cands[c, 0]
                dy = pts[k, 1] - cands[c, 1]
                if dx * dx + dy * dy <= rr2:
                    rows[c, k >> 6] |= (<unsigned long long> 1) << (k & 63)
    return cands, rows
