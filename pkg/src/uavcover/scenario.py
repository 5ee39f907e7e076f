"""Clustered UE snapshot generation and grid discretization.

The square area [0, D]^2 is split into an n-by-n grid; matrix row index is the
y axis and column index the x axis, with row 0 at y = 0. A coordinate exactly
equal to D clamps into the last cell. These conventions are shared with the
file formats in `gmxio` and with any external consumer of the dataset layout.
"""

from dataclasses import dataclass, field

import numpy as np

from uavcover.geometry import as_points


class ConfigError(ValueError):
    """Invalid generation or area parameters."""


@dataclass(frozen=True)
class AreaSpec:
    """Square deployment area: side length in meters and grid cells per side."""

    side_d: float
    grid_n: int = 256

    def __post_init__(self):
        if not (self.side_d > 0 and np.isfinite(self.side_d)):
            raise ConfigError(f"side_d must be positive and finite, got {self.side_d}")
        if int(self.grid_n) != self.grid_n or self.grid_n < 2:
            raise ConfigError(f"grid_n must be an integer >= 2, got {self.grid_n}")

    @property
    def cell_size(self) -> float:
        return self.side_d / self.grid_n


@dataclass(frozen=True)
class CoverageSpec:
    """Coverage ratio and the per-disk radius it implies for a given area."""

    ratio_r: float
    radius_r: float

    def __post_init__(self):
        if not (self.ratio_r > 0 and self.radius_r > 0):
            raise ConfigError("ratio_r and radius_r must be positive")

    @classmethod
    def for_area(cls, area: AreaSpec, ratio_r: float) -> "CoverageSpec":
        if ratio_r <= 0:
            raise ConfigError(f"ratio_r must be positive, got {ratio_r}")
        return cls(ratio_r=ratio_r, radius_r=area.side_d / ratio_r)


@dataclass(frozen=True)
class ScenarioParams:
    """Thomas-style cluster process parameters.

    Cluster-center count is uniform on [cluster_min, cluster_max], centers
    uniform in the area, per-cluster weights Dirichlet(1), offsets isotropic
    Gaussian with sigma = sigma_frac * D resampled into bounds, plus an
    outlier_frac share of uniform outliers.
    """

    count: int
    cluster_min: int = 3
    cluster_max: int = 8
    sigma_frac: float = 0.05
    outlier_frac: float = 0.05

    def __post_init__(self):
        if self.count < 0:
            raise ConfigError(f"count must be >= 0, got {self.count}")
        if not (1 <= self.cluster_min <= self.cluster_max):
            raise ConfigError("need 1 <= cluster_min <= cluster_max")
        if not self.sigma_frac > 0:
            raise ConfigError("sigma_frac must be positive")
        if not 0.0 <= self.outlier_frac <= 1.0:
            raise ConfigError("outlier_frac must be in [0, 1]")


@dataclass
class UEScenario:
    """A UE snapshot: points in meters plus the recipe that produced it."""

    points: np.ndarray
    seed: int
    params: ScenarioParams
    area: AreaSpec

    @property
    def p(self) -> int:
        return self.points.shape[0]


def generate_scenario(area: AreaSpec, params: ScenarioParams, seed: int) -> UEScenario:
    """Deterministic clustered snapshot: exactly params.count in-bounds points."""
    rng = np.random.default_rng(seed)
    d = area.side_d
    p = params.count
    if p == 0:
        return UEScenario(np.empty((0, 2)), seed, params, area)

    n_out = int(round(params.outlier_frac * p))
    n_clu = p - n_out
    chunks = []
    if n_clu > 0:
        c = int(rng.integers(params.cluster_min, params.cluster_max + 1))
        centers = rng.uniform(0.0, d, size=(c, 2))
        weights = rng.dirichlet(np.ones(c))
        counts = rng.multinomial(n_clu, weights)
        sigma = params.sigma_frac * d
        for k in range(c):
            need = int(counts[k])
            placed = np.empty((need, 2))
            got = 0
            while got < need:
                cand = centers[k] + rng.normal(0.0, sigma, size=(need - got, 2))
                ok = ((cand >= 0.0) & (cand <= d)).all(axis=1)
                cand = cand[ok]
                placed[got : got + cand.shape[0]] = cand
                got += cand.shape[0]
            chunks.append(placed)
    if n_out > 0:
        chunks.append(rng.uniform(0.0, d, size=(n_out, 2)))
    points = np.concatenate(chunks, axis=0)
    return UEScenario(points, seed, params, area)


def points_to_grid(points, area: AreaSpec) -> np.ndarray:
    """Count points per grid cell -> (n, n) int64 matrix, row = y, col = x."""
    pts = as_points(points)
    n = area.grid_n
    grid = np.zeros((n, n), dtype=np.int64)
    if pts.shape[0] == 0:
        return grid
    if (pts < 0.0).any() or (pts > area.side_d).any():
        raise ValueError("point outside area bounds")
    cols = np.minimum((pts[:, 0] / area.side_d * n).astype(np.int64), n - 1)
    rows = np.minimum((pts[:, 1] / area.side_d * n).astype(np.int64), n - 1)
    np.add.at(grid, (rows, cols), 1)
    return grid


def discretize(scenario: UEScenario, area: AreaSpec | None = None) -> np.ndarray:
    """UE-count matrix of a scenario (sum of entries equals the UE count)."""
    return points_to_grid(scenario.points, area if area is not None else scenario.area)


def grid_to_points(matrix, area: AreaSpec, mode: str = "mass", theta: float = 0.5):
    """Map a grid matrix back to continuous points at cell centers.

    mode="mass": one point per unit of (integral) cell mass; mode="cells": one
    point per cell with value >= theta.
    """
    m = np.asarray(matrix)
    n = area.grid_n
    if m.shape != (n, n):
        raise ValueError(f"matrix shape {m.shape} does not match grid_n {n}")
    if mode == "mass":
        if not np.issubdtype(m.dtype, np.integer):
            if not np.allclose(m, np.round(m)):
                raise ValueError("mass mode requires integral cell values")
            m = np.round(m).astype(np.int64)
        rows, cols = np.nonzero(m)
        reps = m[rows, cols]
        rows = np.repeat(rows, reps)
        cols = np.repeat(cols, reps)
    elif mode == "cells":
        rows, cols = np.nonzero(m >= theta)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cell = area.side_d / n
    out = np.empty((rows.shape[0], 2))
    out[:, 0] = (cols + 0.5) * cell
    out[:, 1] = (rows + 0.5) * cell
    return out
