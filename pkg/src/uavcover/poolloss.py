"""Multi-scale sum-pooling loss between a template and a generated grid.

Each level sum-pools both matrices with an f-by-f all-ones window at stride 1
and same-size zero padding, then accumulates the summed squared difference.
Doubling f per level turns small spatial dislocations into graded penalties
instead of the all-or-nothing miss a plain elementwise distance produces.
Integer inputs stay in exact integer arithmetic throughout.
"""

from dataclasses import dataclass

import numpy as np


def default_schedule(grid_n: int) -> list[int]:
    """Powers of two 1, 2, 4, ... capped at min(64, grid_n)."""
    cap = min(64, grid_n)
    out = []
    f = 1
    while f <= cap:
        out.append(f)
        f *= 2
    return out


def _validate_schedule(schedule, grid_n: int):
    sched = [int(f) for f in schedule]
    if not sched:
        raise ValueError("empty filter schedule")
    cap = min(64, grid_n)
    prev = 0
    for f in sched:
        if f < 1 or (f & (f - 1)) != 0:
            raise ValueError(f"filter sizes must be powers of two, got {f}")
        if f <= prev:
            raise ValueError("filter schedule must be strictly increasing")
        if f > cap:
            raise ValueError(f"filter size {f} exceeds cap min(64, n) = {cap}")
        prev = f
    return sched


@dataclass
class PoolLossResult:
    """Per-filter-level losses and their sum."""

    per_level: list[tuple[int, float]]
    total: float


def sum_pool(matrix, f: int) -> np.ndarray:
    """Same-shape f-by-f window sums with zero padding, stride 1.

    The window for output cell i spans input rows i - f//2 .. i + (f-1)//2
    (likewise for columns), so f=1 is the identity. Computed with a summed
    area table; exact for integer inputs.
    """
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {m.shape}")
    n_r, n_c = m.shape
    if not (1 <= f <= min(n_r, n_c)):
        raise ValueError(f"filter size {f} out of range [1, {min(n_r, n_c)}]")
    if f == 1:
        return m.copy()
    acc_dtype = np.int64 if np.issubdtype(m.dtype, np.integer) else np.float64
    sat = np.zeros((n_r + 1, n_c + 1), dtype=acc_dtype)
    np.cumsum(m, axis=0, dtype=acc_dtype, out=sat[1:, 1:])
    np.cumsum(sat[1:, 1:], axis=1, out=sat[1:, 1:])
    lo_r = np.clip(np.arange(n_r) - f // 2, 0, n_r)
    hi_r = np.clip(np.arange(n_r) - f // 2 + f, 0, n_r)
    lo_c = np.clip(np.arange(n_c) - f // 2, 0, n_c)
    hi_c = np.clip(np.arange(n_c) - f // 2 + f, 0, n_c)
    return (
        sat[np.ix_(hi_r, hi_c)]
        - sat[np.ix_(lo_r, hi_c)]
        - sat[np.ix_(hi_r, lo_c)]
        + sat[np.ix_(lo_r, lo_c)]
    )


def pool_loss(template, generated, schedule=None) -> PoolLossResult:
    """Summed squared error between pooled matrices over the filter schedule."""
    k = np.asarray(template)
    y = np.asarray(generated)
    if k.shape != y.shape:
        raise ValueError(f"shape mismatch: {k.shape} vs {y.shape}")
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError(f"matrices must be square 2-D, got shape {k.shape}")
    n = k.shape[0]
    sched = default_schedule(n) if schedule is None else _validate_schedule(schedule, n)
    exact = np.issubdtype(k.dtype, np.integer) and np.issubdtype(y.dtype, np.integer)
    if not exact:
        k = k.astype(np.float64)
        y = y.astype(np.float64)
    per_level = []
    total = 0 if exact else 0.0
    for f in sched:
        diff = sum_pool(k, f) - sum_pool(y, f)
        level = (diff * diff).sum()
        level = int(level) if exact else float(level)
        per_level.append((f, level))
        total += level
    return PoolLossResult(per_level=per_level, total=total)
