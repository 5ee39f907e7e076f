"""uavcover: disk-cover planning and benchmarking for aerial base stations."""

from uavcover.correction import CorrectionConfig, coords_to_centers, correct, sparse_to_coords
from uavcover.geometry import Disk, convex_hull, coverage_count, minimum_enclosing_circle
from uavcover.pipeline import CoverageReport, deploy, evaluate, export_dataset, import_predictions
from uavcover.poolloss import PoolLossResult, pool_loss, sum_pool
from uavcover.scenario import (
    AreaSpec,
    CoverageSpec,
    ScenarioParams,
    UEScenario,
    discretize,
    generate_scenario,
    grid_to_points,
)
from uavcover.solvers import (
    PlacementSolution,
    SolverConfig,
    brute_force_min_cover,
    solve_exact,
    solve_kmeans,
    solve_spiral,
)

__version__ = "0.1.0"

__all__ = [
    "AreaSpec",
    "CorrectionConfig",
    "CoverageReport",
    "CoverageSpec",
    "Disk",
    "PlacementSolution",
    "PoolLossResult",
    "ScenarioParams",
    "SolverConfig",
    "UEScenario",
    "brute_force_min_cover",
    "convex_hull",
    "coords_to_centers",
    "correct",
    "coverage_count",
    "deploy",
    "discretize",
    "evaluate",
    "export_dataset",
    "generate_scenario",
    "grid_to_points",
    "import_predictions",
    "minimum_enclosing_circle",
    "pool_loss",
    "solve_exact",
    "solve_kmeans",
    "solve_spiral",
    "sparse_to_coords",
    "sum_pool",
]
