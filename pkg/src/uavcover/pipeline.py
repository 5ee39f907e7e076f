"""Deployment pipeline: raw generated matrix -> corrected continuous centers,
coverage scoring, and the dataset interchange used to train the generator.

Wall time for deploy() covers only the algorithmic composition (thresholding,
correction, coordinate mapping); file I/O and scenario preparation are never
timed.
"""

import os
import re
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from uavcover import gmxio
from uavcover.correction import CorrectionConfig, coords_to_centers, correct, sparse_to_coords
from uavcover.geometry import COVER_RTOL, as_points
from uavcover.scenario import AreaSpec, CoverageSpec, UEScenario, points_to_grid
from uavcover.solvers import PlacementSolution, SolverConfig, solve_exact, solve_spiral
from uavcover import kernels


@dataclass
class CoverageReport:
    """One scored placement: Table-row shaped."""

    algorithm: str
    coverage_pct: float
    uav_count: int
    wall_time_s: float
    p: int
    ratio_r: float
    epsilon: float | None = None
    blur_y_count: int | None = None

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "coverage_pct": self.coverage_pct,
            "uav_count": self.uav_count,
            "wall_time_s": self.wall_time_s,
            "p": self.p,
            "ratio_r": self.ratio_r,
            "epsilon": self.epsilon,
            "blur_y_count": self.blur_y_count,
        }


def deploy(y_raw, area: AreaSpec, coverage: CoverageSpec, corr: CorrectionConfig) -> PlacementSolution:
    """Threshold, de-blur, and map a raw generated matrix to UAV centers."""
    m = np.asarray(y_raw)
    if m.shape != (area.grid_n, area.grid_n):
        raise ValueError(f"matrix shape {m.shape} does not match grid_n {area.grid_n}")
    t0 = perf_counter()
    coords = sparse_to_coords(m, corr.threshold_theta)
    merged = correct(coords, corr.epsilon)
    centers = coords_to_centers(merged, area)
    wall = perf_counter() - t0
    return PlacementSolution(
        centers=centers,
        radius_r=coverage.radius_r,
        algorithm="proposed",
        wall_time_s=wall,
        covered_count=0,
        optimal=False,
        blur_y_count=int(coords.shape[0]),
    )


def evaluate(solution: PlacementSolution, scenario: UEScenario, epsilon: float | None = None) -> CoverageReport:
    """Score a placement against a scenario; p == 0 counts as fully covered."""
    p = scenario.p
    if p == 0:
        pct = 100.0
    else:
        covered = kernels.coverage_count(
            scenario.points, solution.centers, solution.radius_r, COVER_RTOL
        )
        pct = 100.0 * covered / p
    return CoverageReport(
        algorithm=solution.algorithm,
        coverage_pct=pct,
        uav_count=solution.uav_count,
        wall_time_s=solution.wall_time_s,
        p=p,
        ratio_r=scenario.area.side_d / solution.radius_r,
        epsilon=epsilon,
        blur_y_count=solution.blur_y_count,
    )


def export_dataset(
    scenarios,
    ratio_r: float,
    out_dir,
    template: str = "exact",
    solver_config: SolverConfig | None = None,
):
    """Write paired UE/template matrices plus the manifest for each scenario.

    The template matrix holds one unit per UAV cell. template="exact" falls
    back to spiral per case when the exact budget is exhausted (recorded in
    the manifest).
    """
    if template not in ("exact", "spiral"):
        raise ValueError(f"template solver must be 'exact' or 'spiral', got {template!r}")
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for case_id, scen in enumerate(scenarios):
        area = scen.area
        radius = area.side_d / ratio_r
        if template == "exact":
            sol = solve_exact(scen.points, radius, solver_config)
            alg, optimal = "exact", sol.optimal
            if sol.budget_exceeded:
                sol = solve_spiral(scen.points, radius)
                alg, optimal = "spiral", False
        else:
            sol = solve_spiral(scen.points, radius)
            alg, optimal = "spiral", False
        x = points_to_grid(scen.points, area)
        k = np.zeros((area.grid_n, area.grid_n), dtype=np.int64)
        if sol.uav_count:
            cell = area.side_d / area.grid_n
            cols = np.minimum((sol.centers[:, 0] / cell).astype(np.int64), area.grid_n - 1)
            rws = np.minimum((sol.centers[:, 1] / cell).astype(np.int64), area.grid_n - 1)
            k[rws, cols] = 1
        gmxio.write_matrix(gmxio.case_path(out_dir, case_id, "X"), x)
        gmxio.write_matrix(gmxio.case_path(out_dir, case_id, "K"), k)
        rows.append(
            gmxio.ManifestRow(
                case_id=case_id,
                seed=scen.seed,
                p=scen.p,
                ratio_r=ratio_r,
                template_alg=alg,
                uav_count=sol.uav_count,
                optimal=optimal,
            )
        )
    gmxio.write_manifest(os.path.join(out_dir, "manifest.tsv"), rows)
    return rows


_PRED_RE = re.compile(r"^case_(\d+)\.Yhat\.gmx$")


def import_predictions(directory):
    """Load case_<k>.Yhat.gmx matrices -> (sorted [(case_id, matrix)], errors).

    Entries must be finite; values below -1e-9 are rejected, tiny negative
    rounding noise is clamped to zero. Errors are itemized per case so one
    bad file never blocks the rest.
    """
    loaded = []
    errors = []
    for name in sorted(os.listdir(directory)):
        m = _PRED_RE.match(name)
        if not m:
            continue
        case_id = int(m.group(1))
        path = os.path.join(directory, name)
        try:
            mat = _read_prediction(path)
        except (gmxio.ParseError, ValueError) as exc:
            errors.append((case_id, str(exc)))
            continue
        loaded.append((case_id, mat))
    return loaded, errors


def _read_prediction(path):
    # like gmxio.read_matrix but tolerating tiny negative generator noise
    try:
        return gmxio.read_matrix(path)
    except gmxio.ParseError as exc:
        if "negative" not in str(exc):
            raise
    mat = _read_matrix_allow_negative(path)
    if (mat < -1e-9).any():
        raise gmxio.ParseError(f"{path}: negative matrix entry")
    return np.maximum(mat, 0.0)


def _read_matrix_allow_negative(path):
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        rows, cols = int(header[2]), int(header[3])
        kind = header[4]
        dtype = np.int64 if kind == "int" else np.float64
        out = np.empty((rows, cols), dtype=dtype)
        for i in range(rows):
            out[i] = [dtype(t) for t in fh.readline().split()]
    return out
