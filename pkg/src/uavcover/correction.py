"""De-blurring of predicted UAV cells: greedy epsilon-merge of coordinates.

A raw generated matrix is first flattened to a coordinate list (x = column,
y = row, grid units); the sweep then repeatedly pops the first remaining
coordinate, pulls in every remaining coordinate strictly closer than epsilon,
and replaces the group by its mean. The scan order is the deterministic
row-major pop order by default; a seeded shuffle reproduces the
pick-at-random variant when wanted.
"""

from dataclasses import dataclass

import numpy as np

from uavcover import kernels
from uavcover.scenario import AreaSpec


@dataclass(frozen=True)
class CorrectionConfig:
    """Merge radius (grid-cell units) and binarization threshold for raw output."""

    epsilon: float
    threshold_theta: float = 0.5

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 <= self.threshold_theta <= 1.0:
            raise ValueError(f"threshold_theta must be in [0, 1], got {self.threshold_theta}")


def sparse_to_coords(matrix, theta: float = 0.5) -> np.ndarray:
    """Grid coordinates (x=col, y=row) of cells with value >= theta, row-major."""
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {m.shape}")
    rows, cols = np.nonzero(m >= theta)
    out = np.empty((rows.shape[0], 2), dtype=np.float64)
    out[:, 0] = cols
    out[:, 1] = rows
    return out


def correct(coords, epsilon: float, shuffle_seed: int | None = None) -> np.ndarray:
    """Collapse blurred coordinate clusters; merge iff distance < epsilon.

    With shuffle_seed set, the scan order is a seeded permutation instead of
    the input order. Output length never exceeds input length.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    pts = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
    if shuffle_seed is not None:
        perm = np.random.default_rng(shuffle_seed).permutation(pts.shape[0])
        pts = pts[perm]
    return kernels.correct_sweep(pts, epsilon)


def coords_to_centers(coords, area: AreaSpec) -> np.ndarray:
    """Grid coordinates to continuous centers: (x+0.5, y+0.5) scaled by D/n."""
    pts = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
    return (pts + 0.5) * (area.side_d / area.grid_n)
