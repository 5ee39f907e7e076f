"""Minimum-disk-cover solvers sharing one coverage predicate.

Three production solvers (exact, spiral, k-means) plus an exhaustive oracle
for cross-validation. The exact solver enumerates the classical candidate
centers (input points plus radius-r circle-pair intersections: some optimal
cover always uses only those) and runs best-first branch and bound over the
induced set-cover instance, with a per-call wall-clock budget that degrades
to a flagged upper bound instead of failing. All orderings are deterministic;
lexicographic (y, then x) breaks geometric ties.
"""

import heapq
import itertools
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from uavcover import kernels
from uavcover.geometry import COVER_RTOL, as_points, convex_hull


@dataclass(frozen=True)
class SolverConfig:
    time_budget_s: float = 30.0
    kmeans_restarts: int = 3
    kmeans_max_iter: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        if not self.time_budget_s > 0:
            raise ValueError("time_budget_s must be positive")
        if self.kmeans_restarts < 1:
            raise ValueError("kmeans_restarts must be >= 1")
        if self.kmeans_max_iter < 1:
            raise ValueError("kmeans_max_iter must be >= 1")


@dataclass
class PlacementSolution:
    """UAV centers with their common coverage radius and solve metadata."""

    centers: np.ndarray
    radius_r: float
    algorithm: str
    wall_time_s: float
    covered_count: int
    optimal: bool = True
    budget_exceeded: bool = False
    blur_y_count: int | None = None

    @property
    def uav_count(self) -> int:
        return int(self.centers.shape[0])


def _solution(centers, radius_r, algorithm, t0, points, **kw) -> PlacementSolution:
    cen = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    wall = perf_counter() - t0
    covered = kernels.coverage_count(points, cen, radius_r, COVER_RTOL) if len(cen) else 0
    return PlacementSolution(
        centers=cen,
        radius_r=radius_r,
        algorithm=algorithm,
        wall_time_s=wall,
        covered_count=covered,
        **kw,
    )


def _components(pts, link_dist):
    """Indices of connected components of the <= link_dist proximity graph.

    Disks of radius r never span components of the 2r graph, so each
    component can be covered independently.
    """
    p = pts.shape[0]
    unvisited = np.ones(p, dtype=bool)
    d2max = link_dist * link_dist
    comps = []
    for seed in range(p):
        if not unvisited[seed]:
            continue
        unvisited[seed] = False
        members = [seed]
        frontier = [seed]
        while frontier:
            fpts = pts[frontier]
            rest = np.nonzero(unvisited)[0]
            if rest.shape[0] == 0:
                break
            d2 = ((pts[rest, None, :] - fpts[None, :, :]) ** 2).sum(axis=2)
            hit = rest[(d2 <= d2max).any(axis=1)]
            unvisited[hit] = False
            members.extend(hit.tolist())
            frontier = hit.tolist()
        comps.append(np.asarray(sorted(members), dtype=np.intp))
    return comps


def _popcount_rows(rows):
    return np.bitwise_count(rows).sum(axis=1).astype(np.int64)


def _greedy_packing(coords, link2):
    """Count of points pairwise farther than the link distance (greedy).

    No radius-r disk covers two such points, so this is a lower bound on the
    cover size; on clustered instances it is usually tight.
    """
    count = 0
    idxs = np.arange(coords.shape[0])
    while idxs.size:
        i = idxs[0]
        count += 1
        d2 = (coords[idxs, 0] - coords[i, 0]) ** 2 + (coords[idxs, 1] - coords[i, 1]) ** 2
        idxs = idxs[d2 > link2]
    return count


def _pack_mask(n_points, words):
    full = np.zeros(words, dtype=np.uint64)
    for w in range(words):
        bits = min(64, n_points - w * 64)
        if bits > 0:
            full[w] = np.uint64((1 << bits) - 1)
    return full


def _unpack_bits(mask, n_points):
    return np.unpackbits(mask.view(np.uint8), bitorder="little")[:n_points].astype(bool)


_DEDUPE_CAP = 300_000  # above this the unique() sort costs more than it saves


def _dedupe_rows(cands, rows):
    if rows.shape[0] > _DEDUPE_CAP:
        return cands, rows
    uniq, first = np.unique(rows, axis=0, return_index=True)
    order = np.sort(first)
    return cands[order], rows[order]


_DOMINANCE_BAIL = 4000  # once this many maximal rows exist, keep the rest unchecked


def _drop_dominated(cands, rows):
    """Remove rows that are strict subsets of another row (cover-preserving).

    Rows are scanned in descending coverage order, so a dropped row always has
    a kept superset. If the maximal set grows past the bail threshold the
    remaining rows are kept unchecked (correct, merely less pruned).
    """
    pops = _popcount_rows(rows)
    order = np.lexsort((np.arange(rows.shape[0]), -pops))
    kept = np.empty_like(rows)
    kept_idx = []
    n_kept = 0
    for pos, ri in enumerate(order):
        if n_kept >= _DOMINANCE_BAIL:
            kept_idx.extend(order[pos:].tolist())
            break
        row = rows[ri]
        if n_kept and (~((row & ~kept[:n_kept]).any(axis=1))).any():
            continue
        kept[n_kept] = row
        kept_idx.append(ri)
        n_kept += 1
    kept_idx = np.asarray(sorted(kept_idx), dtype=np.intp)
    return cands[kept_idx], rows[kept_idx]


def _greedy_cover(rows, full_mask):
    unc = full_mask.copy()
    sel = []
    while np.bitwise_count(unc).sum() > 0:
        gains = _popcount_rows(rows & unc)
        ri = int(gains.argmax())
        if gains[ri] == 0:
            raise RuntimeError("uncoverable point in set-cover instance")
        sel.append(ri)
        unc &= ~rows[ri]
    return sel


def _set_cover_bb(pts, cands, rows, radius_r, ub_centers, deadline, lb_floor=1):
    """Best-first branch and bound over packed candidate coverage rows.

    A node whose uncovered remainder fits a single radius-r disk (checked via
    its MEC, which need not be a candidate center) closes immediately, so the
    last search level never scans the row matrix. Returns
    (best_centers, proven_optimal).
    """
    m, words = rows.shape
    n_points = pts.shape[0]
    full = _pack_mask(n_points, words)
    max_row = int(_popcount_rows(rows).max())
    limit = radius_r * (1.0 + COVER_RTOL)
    link2 = (2.0 * limit) ** 2

    best_centers = ub_centers
    best_size = ub_centers.shape[0]
    root_lb = max(lb_floor, -(-n_points // max_row))
    if root_lb >= best_size:
        return best_centers, True

    static_counts = None  # built on first branch; costs one pass over the rows

    def assemble(chosen, extra):
        parts = [cands[np.asarray(chosen, dtype=np.intp)]] if chosen else []
        if extra is not None:
            parts.append(np.asarray([extra]))
        return np.concatenate(parts, axis=0)

    seq = itertools.count()
    heap = [(root_lb, 0, next(seq), full.tobytes(), ())]
    optimal = True
    while heap:
        if perf_counter() > deadline:
            optimal = False
            break
        bound, negdepth, _, unc_bytes, chosen = heapq.heappop(heap)
        if bound >= best_size:
            break  # best-first: every remaining node is at least as bad
        depth = -negdepth
        unc = np.frombuffer(unc_bytes, dtype=np.uint64)
        unc_bits = _unpack_bits(unc, n_points)
        unc_idx = np.nonzero(unc_bits)[0]
        unc_pts = pts[unc_idx]
        ucx, ucy, umr = kernels.mec(unc_pts)
        if umr <= limit:
            if depth + 1 < best_size:
                best_size = depth + 1
                best_centers = assemble(chosen, (ucx, ucy))
            continue
        if depth + max(2, _greedy_packing(unc_pts, link2)) >= best_size:
            continue
        inter = rows & unc
        gains = _popcount_rows(inter)
        max_gain = int(gains.max())
        if depth + max(2, -(-unc_idx.shape[0] // max_gain)) >= best_size:
            continue
        if static_counts is None:
            static_counts = _column_counts(rows, n_points)
        counts = np.where(unc_bits, static_counts, np.iinfo(np.int64).max)
        u = int(counts.argmin())
        col = np.nonzero((rows[:, u >> 6] >> np.uint64(u & 63)) & np.uint64(1))[0]
        order = np.lexsort((col, -gains[col]))
        for ci in order:
            ri = int(col[ci])
            child_unc = unc & ~rows[ri]
            child_pop = int(np.bitwise_count(child_unc).sum())
            if child_pop == 0:
                if depth + 1 < best_size:
                    best_size = depth + 1
                    best_centers = assemble(chosen + (ri,), None)
                continue
            child_bound = depth + 1 + max(1, -(-child_pop // max_row))
            if child_bound < best_size:
                heapq.heappush(
                    heap,
                    (child_bound, -(depth + 1), next(seq), child_unc.tobytes(), chosen + (ri,)),
                )
    return best_centers, optimal


def _column_counts(rows, n_points):
    counts = np.zeros(n_points, dtype=np.int64)
    chunk = max(1, 4_000_000 // max(rows.shape[1] * 64, 1))
    for s in range(0, rows.shape[0], chunk):
        bits = np.unpackbits(rows[s : s + chunk].view(np.uint8), axis=1, bitorder="little")
        counts += bits[:, :n_points].sum(axis=0, dtype=np.int64)
    return counts


_DOMINANCE_CAP = 100_000  # pairwise subset elimination is quadratic; skip above this


def _solve_component(pts, radius_r, deadline):
    """Exact cover of one proximity component -> (centers, optimal, budget_hit)."""
    n = pts.shape[0]
    cx, cy, mec_r = kernels.mec(pts)
    if mec_r <= radius_r * (1.0 + COVER_RTOL):
        return np.array([[cx, cy]]), True, False

    # optimum is >= max(2, packing bound); a matching quasi-optimal cover is optimal
    spiral_centers = _spiral_centers(pts, radius_r)
    link2 = (2.0 * radius_r * (1.0 + COVER_RTOL)) ** 2
    lb0 = max(2, _greedy_packing(pts, link2))
    if spiral_centers.shape[0] <= lb0:
        return spiral_centers, True, False
    if perf_counter() > deadline:
        return spiral_centers, False, True

    cands, rows = kernels.candidate_rows(pts, radius_r, COVER_RTOL)
    cands, rows = _dedupe_rows(cands, rows)
    if rows.shape[0] <= _DOMINANCE_CAP:
        cands, rows = _drop_dominated(cands, rows)
    full = _pack_mask(n, rows.shape[1])
    greedy_sel = _greedy_cover(rows, full)

    ub_centers = cands[np.asarray(greedy_sel, dtype=np.intp)]
    if spiral_centers.shape[0] < ub_centers.shape[0]:
        ub_centers = spiral_centers

    best_centers, optimal = _set_cover_bb(
        pts, cands, rows, radius_r, ub_centers, deadline, lb_floor=lb0
    )
    return best_centers, optimal, not optimal


def solve_exact(points, radius_r, config: SolverConfig | None = None) -> PlacementSolution:
    """Minimum-cardinality radius-r disk cover (candidate-center set cover).

    On budget exhaustion the best-known cover is returned with
    budget_exceeded=True and optimal=False.
    """
    if not radius_r > 0:
        raise ValueError("radius_r must be positive")
    cfg = config or SolverConfig()
    t0 = perf_counter()
    pts = as_points(points)
    if pts.shape[0] == 0:
        return _solution(np.empty((0, 2)), radius_r, "exact", t0, pts)
    deadline = t0 + cfg.time_budget_s
    centers = []
    optimal = True
    budget_hit = False
    for comp in _components(pts, 2.0 * radius_r * (1.0 + COVER_RTOL)):
        c_centers, c_opt, c_budget = _solve_component(pts[comp], radius_r, deadline)
        centers.append(c_centers)
        optimal &= c_opt
        budget_hit |= c_budget
    all_centers = np.concatenate(centers, axis=0)
    return _solution(
        all_centers,
        radius_r,
        "exact",
        t0,
        pts,
        optimal=optimal,
        budget_exceeded=budget_hit,
    )


def _spiral_centers(pts, radius_r):
    """Core spiral loop: returns the (k, 2) center array."""
    p = pts.shape[0]
    uncovered = np.ones(p, dtype=bool)
    centers = []
    prev = None
    reach2 = (2.0 * radius_r * (1.0 + COVER_RTOL)) ** 2
    while uncovered.any():
        idx = np.nonzero(uncovered)[0]
        upts = pts[idx]
        hull = convex_hull(upts)
        if prev is None:
            h = int(np.lexsort((hull[:, 0], hull[:, 1]))[0])
        else:
            d2 = (hull[:, 0] - prev[0]) ** 2 + (hull[:, 1] - prev[1]) ** 2
            h = int(np.lexsort((hull[:, 0], hull[:, 1], d2))[0])
        u0 = hull[h]
        d2 = (upts[:, 0] - u0[0]) ** 2 + (upts[:, 1] - u0[1]) ** 2
        near = d2 <= reach2
        cand = upts[near]
        cd2 = d2[near]
        order = np.lexsort((cand[:, 0], cand[:, 1], cd2))
        cx, cy, _, _ = kernels.greedy_mec_filter(cand[order], radius_r, COVER_RTOL)
        covered = kernels.covered_mask(upts, cx, cy, radius_r, COVER_RTOL)
        uncovered[idx[covered]] = False
        centers.append((cx, cy))
        prev = (cx, cy)
    return np.asarray(centers, dtype=np.float64).reshape(-1, 2)


def solve_spiral(points, radius_r) -> PlacementSolution:
    """Quasi-optimal sequential placement sweeping the uncovered hull inward.

    Each step picks the boundary point nearest the previous center, greedily
    grows the largest radius-feasible local group, and places a disk at that
    group's MEC center. Always reaches 100% coverage.
    """
    if not radius_r > 0:
        raise ValueError("radius_r must be positive")
    t0 = perf_counter()
    pts = as_points(points)
    if pts.shape[0] == 0:
        return _solution(np.empty((0, 2)), radius_r, "spiral", t0, pts, optimal=False)
    centers = _spiral_centers(pts, radius_r)
    return _solution(centers, radius_r, "spiral", t0, pts, optimal=False)


def _kmeanspp_init(pts, k, rng):
    p = pts.shape[0]
    centroids = np.empty((k, 2))
    first = int(rng.integers(p))
    centroids[0] = pts[first]
    d2 = ((pts - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            pick = int(rng.integers(p))  # all remaining points coincide with a centroid
        else:
            pick = int(rng.choice(p, p=d2 / total))
        centroids[j] = pts[pick]
        d2 = np.minimum(d2, ((pts - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _lloyd(pts, centroids, max_iter, tol=1e-9):
    k = centroids.shape[0]
    for _ in range(max_iter):
        d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        new_cent = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_cent[j] = pts[members].mean(axis=0)
            else:
                # re-seed an empty cluster at the worst-served point
                far = int(d2[np.arange(pts.shape[0]), labels].argmax())
                new_cent[j] = pts[far]
        move = np.sqrt(((new_cent - centroids) ** 2).sum(axis=1)).max()
        centroids = new_cent
        if move <= tol:
            break
    d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    maxd = float(np.sqrt(d2[np.arange(pts.shape[0]), labels].max()))
    return centroids, maxd


def solve_kmeans(points, radius_r, config: SolverConfig | None = None) -> PlacementSolution:
    """Smallest k whose best k-means restart serves every point within r."""
    if not radius_r > 0:
        raise ValueError("radius_r must be positive")
    cfg = config or SolverConfig()
    t0 = perf_counter()
    pts = as_points(points)
    p = pts.shape[0]
    if p == 0:
        return _solution(np.empty((0, 2)), radius_r, "kmeans", t0, pts, optimal=False)
    rng = np.random.default_rng(cfg.rng_seed)
    limit = radius_r * (1.0 + COVER_RTOL)
    for k in range(1, p + 1):
        best_maxd = np.inf
        best_cent = None
        for _ in range(cfg.kmeans_restarts):
            cent = _kmeanspp_init(pts, k, rng)
            cent, maxd = _lloyd(pts, cent, cfg.kmeans_max_iter)
            if maxd < best_maxd:
                best_maxd = maxd
                best_cent = cent
        if best_maxd <= limit:
            return _solution(best_cent, radius_r, "kmeans", t0, pts, optimal=False)
    raise AssertionError("unreachable: k == p always covers")


_ORACLE_MAX_POINTS = 14
_ORACLE_ENUM_CAP = 2_000_000


def brute_force_min_cover(points, radius_r) -> int:
    """Exhaustive minimum disk-cover size over the candidate-center universe.

    Ascending-size subset enumeration, falling back to depth-limited
    first-uncovered-point search when the combination count explodes.
    Test oracle only; refuses more than 14 points.
    """
    if not radius_r > 0:
        raise ValueError("radius_r must be positive")
    pts = as_points(points)
    p = pts.shape[0]
    if p == 0:
        return 0
    if p > _ORACLE_MAX_POINTS:
        raise ValueError(f"too many points for the exhaustive oracle ({p} > {_ORACLE_MAX_POINTS})")
    _, rows_packed = kernels.candidate_rows(pts, radius_r, COVER_RTOL)
    rows = sorted({int.from_bytes(r.tobytes(), "little") for r in rows_packed})
    full = (1 << p) - 1

    def comb_count(n, k):
        c = 1
        for i in range(k):
            c = c * (n - i) // (i + 1)
        return c

    for k in range(1, p + 1):
        if comb_count(len(rows), k) <= _ORACLE_ENUM_CAP:
            for combo in itertools.combinations(rows, k):
                acc = 0
                for r in combo:
                    acc |= r
                if acc == full:
                    return k
        elif _cover_dfs(rows, 0, full, 0, k):
            return k
    raise AssertionError("unreachable: point-centered disks always cover")


def _cover_dfs(rows, covered, full, depth, limit):
    if covered == full:
        return True
    if depth == limit:
        return False
    # branch on the lowest uncovered point; every cover must include a row with it
    u_bit = (full & ~covered) & -(full & ~covered)
    for r in rows:
        if r & u_bit and _cover_dfs(rows, covered | r, full, depth + 1, limit):
            return True
    return False
