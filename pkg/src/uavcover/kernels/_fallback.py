"""Pure Python/numpy implementations of the hot kernels.

Same contracts as the compiled `_native` extension; used when the extension
is unavailable or when UAVCOVER_BACKEND=python is set. Semantics (candidate
ordering, tie-breaking, tolerances) must stay identical between backends.
"""

import math

import numpy as np

_CONTAIN_EPS = 3e-14  # multiplicative slack on squared radius for MEC containment


def _shuffled_order(n):
    """Deterministic Fisher-Yates permutation of range(n) (fixed LCG)."""
    order = list(range(n))
    state = (n * 2654435761 + 1013904223) & 0xFFFFFFFF
    for i in range(n - 1, 0, -1):
        state = (state * 1664525 + 1013904223) & 0xFFFFFFFF
        j = state % (i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def _in_circle(cx, cy, r2, x, y):
    dx = x - cx
    dy = y - cy
    return dx * dx + dy * dy <= r2 * (1.0 + _CONTAIN_EPS) + 1e-300


def _circumcircle(ax, ay, bx, by, cx, cy):
    # Relative to a for numerical stability; returns None for collinear triples.
    bx_, by_ = bx - ax, by - ay
    cx_, cy_ = cx - ax, cy - ay
    d = 2.0 * (bx_ * cy_ - by_ * cx_)
    if d == 0.0:
        return None
    b2 = bx_ * bx_ + by_ * by_
    c2 = cx_ * cx_ + cy_ * cy_
    ux = (cy_ * b2 - by_ * c2) / d
    uy = (bx_ * c2 - cx_ * b2) / d
    return ax + ux, ay + uy, ux * ux + uy * uy


def _diameter_circle(ax, ay, bx, by):
    cx = 0.5 * (ax + bx)
    cy = 0.5 * (ay + by)
    dx = ax - cx
    dy = ay - cy
    d1 = dx * dx + dy * dy
    dx = bx - cx
    dy = by - cy
    d2 = dx * dx + dy * dy
    return cx, cy, max(d1, d2)


def _mec_two_fixed(xs, ys, m, px, py, qx, qy):
    """Smallest circle over the first m points with p and q on the boundary."""
    ccx, ccy, cr2 = _diameter_circle(px, py, qx, qy)
    left = None
    right = None
    abx, aby = qx - px, qy - py
    for k in range(m):
        x, y = xs[k], ys[k]
        if _in_circle(ccx, ccy, cr2, x, y):
            continue
        cross = abx * (y - py) - aby * (x - px)
        circ = _circumcircle(px, py, qx, qy, x, y)
        if circ is None:
            continue
        ucx, ucy, ur2 = circ
        ccross = abx * (ucy - py) - aby * (ucx - px)
        if cross > 0.0 and (left is None or ccross > left[3]):
            left = (ucx, ucy, ur2, ccross)
        elif cross < 0.0 and (right is None or ccross < right[3]):
            right = (ucx, ucy, ur2, ccross)
    if left is None and right is None:
        return ccx, ccy, cr2
    if left is None:
        return right[0], right[1], right[2]
    if right is None:
        return left[0], left[1], left[2]
    if left[2] <= right[2]:
        return left[0], left[1], left[2]
    return right[0], right[1], right[2]


def _mec_one_fixed(xs, ys, m, px, py):
    """Smallest circle over the first m points with p on the boundary."""
    ccx, ccy, cr2 = px, py, 0.0
    for k in range(m):
        x, y = xs[k], ys[k]
        if _in_circle(ccx, ccy, cr2, x, y):
            continue
        if cr2 == 0.0:
            ccx, ccy, cr2 = _diameter_circle(px, py, x, y)
        else:
            ccx, ccy, cr2 = _mec_two_fixed(xs, ys, k + 1, px, py, x, y)
    return ccx, ccy, cr2


def mec(points):
    """Minimum enclosing circle of an (n, 2) array -> (cx, cy, radius)."""
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    order = _shuffled_order(n)
    xs = [float(pts[i, 0]) for i in order]
    ys = [float(pts[i, 1]) for i in order]
    ccx, ccy, cr2 = xs[0], ys[0], 0.0
    for i in range(1, n):
        if not _in_circle(ccx, ccy, cr2, xs[i], ys[i]):
            ccx, ccy, cr2 = _mec_one_fixed(xs, ys, i, xs[i], ys[i])
    return ccx, ccy, math.sqrt(cr2)


def covered_mask(points, cx, cy, radius, rtol):
    """Boolean mask of points within radius*(1+rtol) of (cx, cy)."""
    pts = np.asarray(points, dtype=np.float64)
    rr = radius * (1.0 + rtol)
    d2 = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2
    return d2 <= rr * rr


def coverage_count(points, centers, radius, rtol):
    """Count points within radius*(1+rtol) of at least one center."""
    pts = np.asarray(points, dtype=np.float64)
    cen = np.asarray(centers, dtype=np.float64)
    if pts.shape[0] == 0 or cen.shape[0] == 0:
        return 0
    rr2 = (radius * (1.0 + rtol)) ** 2
    covered = np.zeros(pts.shape[0], dtype=bool)
    for k in range(cen.shape[0]):
        d2 = (pts[:, 0] - cen[k, 0]) ** 2 + (pts[:, 1] - cen[k, 1]) ** 2
        covered |= d2 <= rr2
    return int(covered.sum())


def correct_sweep(coords, epsilon):
    """Greedy first-pop merge: pivot + strictly-closer-than-epsilon neighbours
    collapse to their mean, in input order. Returns an (L, 2) array."""
    pts = np.asarray(coords, dtype=np.float64)
    m = pts.shape[0]
    if m == 0:
        return np.empty((0, 2), dtype=np.float64)
    xs = pts[:, 0]
    ys = pts[:, 1]
    e2 = epsilon * epsilon
    alive = np.ones(m, dtype=bool)
    out = []
    for i in range(m):
        if not alive[i]:
            continue
        alive[i] = False
        d2 = (xs - xs[i]) ** 2 + (ys - ys[i]) ** 2
        grp = np.nonzero(alive & (d2 < e2))[0]
        alive[grp] = False
        cnt = 1 + grp.shape[0]
        sx = xs[i] + xs[grp].sum()
        sy = ys[i] + ys[grp].sum()
        out.append((sx / cnt, sy / cnt))
    return np.asarray(out, dtype=np.float64)


def greedy_mec_filter(cands, radius, rtol):
    """Spiral inner step: scan candidates in order (first one is the pivot and
    always kept), keeping each whose inclusion leaves the MEC radius within
    radius*(1+rtol). Returns (cx, cy, mec_radius, n_selected)."""
    pts = np.asarray(cands, dtype=np.float64)
    n = pts.shape[0]
    if n == 0:
        raise ValueError("empty candidate set")
    limit = radius * (1.0 + rtol)
    limit2 = limit * limit
    xs = [float(pts[0, 0])]
    ys = [float(pts[0, 1])]
    ccx, ccy, cr2 = xs[0], ys[0], 0.0
    for i in range(1, n):
        x, y = float(pts[i, 0]), float(pts[i, 1])
        if _in_circle(ccx, ccy, cr2, x, y):
            xs.append(x)
            ys.append(y)
            continue
        ncx, ncy, nr2 = _mec_one_fixed(xs, ys, len(xs), x, y)
        if nr2 <= limit2:
            xs.append(x)
            ys.append(y)
            ccx, ccy, cr2 = ncx, ncy, nr2
    return ccx, ccy, math.sqrt(cr2), len(xs)


def candidate_rows(points, radius, rtol):
    """Candidate disk centers and their bit-packed coverage rows.

    Candidates: every input point, then for each pair (i<j) closer than 2r the
    two radius-r circle intersection points (+normal side first). Row bit k of
    word w covers point index w*64+k. Returns (centers (m,2), rows (m,W) uint64).
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n == 0:
        return np.empty((0, 2), dtype=np.float64), np.empty((0, 0), dtype=np.uint64)
    r = float(radius)
    ii, jj = np.triu_indices(n, k=1)
    dx = pts[jj, 0] - pts[ii, 0]
    dy = pts[jj, 1] - pts[ii, 1]
    d2 = dx * dx + dy * dy
    keep = (d2 <= 4.0 * r * r) & (d2 > 1e-24)
    ii, jj, dx, dy, d2 = ii[keep], jj[keep], dx[keep], dy[keep], d2[keep]
    d = np.sqrt(d2)
    h = np.sqrt(np.maximum(r * r - 0.25 * d2, 0.0))
    mx = 0.5 * (pts[ii, 0] + pts[jj, 0])
    my = 0.5 * (pts[ii, 1] + pts[jj, 1])
    nx = -dy / d
    ny = dx / d
    m = n + 2 * ii.shape[0]
    cands = np.empty((m, 2), dtype=np.float64)
    cands[:n] = pts
    cands[n::2, 0] = mx + h * nx
    cands[n::2, 1] = my + h * ny
    cands[n + 1 :: 2, 0] = mx - h * nx
    cands[n + 1 :: 2, 1] = my - h * ny

    words = (n + 63) // 64
    rows = np.zeros((m, words), dtype=np.uint64)
    rr2 = (r * (1.0 + rtol)) ** 2
    px = pts[:, 0]
    py = pts[:, 1]
    chunk = max(1, 4_000_000 // max(n, 1))
    for s in range(0, m, chunk):
        e = min(s + chunk, m)
        d2c = (cands[s:e, 0:1] - px) ** 2 + (cands[s:e, 1:2] - py) ** 2
        cov = d2c <= rr2
        padded = np.zeros((e - s, words * 64), dtype=bool)
        padded[:, :n] = cov
        packed = np.packbits(padded, axis=1, bitorder="little")
        rows[s:e] = packed.view(np.uint64)
    return cands, rows
