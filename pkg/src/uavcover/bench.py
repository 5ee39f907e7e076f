"""Benchmark harness: per-(algorithm, ratio, UE-count) aggregate statistics.

Scenario seeds derive from (master seed, cell, sample index), so every
non-timing field of a report is reproducible bit-for-bit. Timing uses a
monotonic clock with one discarded warm-up run per (algorithm, cell).
"""

import csv
import io
import json
import platform
import statistics
from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from uavcover import kernels
from uavcover.correction import CorrectionConfig
from uavcover.gmxio import read_manifest
from uavcover.pipeline import deploy, evaluate, import_predictions
from uavcover.scenario import AreaSpec, ConfigError, CoverageSpec, ScenarioParams, generate_scenario
from uavcover.solvers import SolverConfig, solve_exact, solve_kmeans, solve_spiral

CSV_HEADER = (
    "algorithm,R,p,epsilon,samples,mean_time_s,sd_time_s,"
    "mean_coverage_pct,mean_uavs,sd_uavs,mean_blur_factor"
)

_TIMING_COLUMNS = ("mean_time_s", "sd_time_s")


@dataclass(frozen=True)
class BenchConfig:
    ratios: tuple = (2.0, 4.0, 6.0)
    ue_counts: tuple = (400, 1000)
    epsilons: tuple = (160.0, 60.0, 40.0)  # aligned with ratios, grid-cell units
    samples: int = 50
    seed: int = 0
    solvers: tuple = ("exact", "spiral", "kmeans")
    exact_ratios: tuple = (2.0,)
    exact_budget_s: float = 30.0
    side_d: float = 1000.0
    grid_n: int = 256
    kmeans_restarts: int = 3
    kmeans_max_iter: int = 100
    dataset_dir: str | None = None
    predictions_dir: str | None = None
    theta: float = 0.5

    def __post_init__(self):
        if len(self.epsilons) != len(self.ratios):
            raise ConfigError("epsilons must align one-to-one with ratios")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        for alg in self.solvers:
            if alg not in ("exact", "spiral", "kmeans"):
                raise ConfigError(f"unknown solver {alg!r}")
        if any(r <= 0 for r in self.ratios) or any(p < 0 for p in self.ue_counts):
            raise ConfigError("ratios must be positive and UE counts non-negative")
        if any(e <= 0 for e in self.epsilons):
            raise ConfigError("epsilons must be positive")

    def epsilon_for(self, ratio):
        return self.epsilons[self.ratios.index(ratio)]

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        for key in ("ratios", "ue_counts", "epsilons", "solvers", "exact_ratios"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)


@dataclass
class CellRow:
    algorithm: str
    ratio_r: float
    p: int
    epsilon: float
    samples: int
    mean_time_s: float
    sd_time_s: float
    mean_coverage_pct: float
    mean_uavs: float
    sd_uavs: float
    mean_blur_factor: float | None

    def to_csv_fields(self):
        def g(v):
            return "" if v is None else format(v, ".10g")

        return [
            self.algorithm,
            g(self.ratio_r),
            str(self.p),
            g(self.epsilon),
            str(self.samples),
            g(self.mean_time_s),
            g(self.sd_time_s),
            g(self.mean_coverage_pct),
            g(self.mean_uavs),
            g(self.sd_uavs),
            g(self.mean_blur_factor),
        ]


@dataclass
class BenchReport:
    rows: list
    skipped: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for row in self.rows:
            writer.writerow(row.to_csv_fields())
        return buf.getvalue()

    def to_json_dict(self):
        return {
            "meta": self.meta,
            "rows": [
                {k: getattr(r, k) for k in (
                    "algorithm", "ratio_r", "p", "epsilon", "samples",
                    "mean_time_s", "sd_time_s", "mean_coverage_pct",
                    "mean_uavs", "sd_uavs", "mean_blur_factor",
                )}
                for r in self.rows
            ],
            "skipped": self.skipped,
            "errors": self.errors,
        }


def case_seed(master_seed: int, ratio_idx: int, p_idx: int, sample: int) -> int:
    seq = np.random.SeedSequence([master_seed, ratio_idx, p_idx, sample])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _aggregate(algorithm, ratio, p, epsilon, reports):
    times = [r.wall_time_s for r in reports]
    uavs = [r.uav_count for r in reports]
    covs = [r.coverage_pct for r in reports]
    blurs = [
        r.blur_y_count / r.uav_count
        for r in reports
        if r.blur_y_count is not None and r.uav_count > 0
    ]
    return CellRow(
        algorithm=algorithm,
        ratio_r=ratio,
        p=p,
        epsilon=epsilon,
        samples=len(reports),
        mean_time_s=statistics.fmean(times),
        sd_time_s=statistics.stdev(times) if len(times) > 1 else 0.0,
        mean_coverage_pct=statistics.fmean(covs),
        mean_uavs=statistics.fmean(uavs),
        sd_uavs=statistics.stdev(uavs) if len(uavs) > 1 else 0.0,
        mean_blur_factor=statistics.fmean(blurs) if blurs else None,
    )


def run_bench(config: BenchConfig, progress=None) -> BenchReport:
    """Run the full benchmark grid; per-case failures are recorded, not fatal."""
    area = AreaSpec(side_d=config.side_d, grid_n=config.grid_n)
    solver_cfg = SolverConfig(
        time_budget_s=config.exact_budget_s,
        kmeans_restarts=config.kmeans_restarts,
        kmeans_max_iter=config.kmeans_max_iter,
        rng_seed=config.seed,
    )
    rows = []
    skipped = []
    errors = []
    for ri, ratio in enumerate(config.ratios):
        radius = area.side_d / ratio
        epsilon = config.epsilon_for(ratio)
        for pi, p in enumerate(config.ue_counts):
            scenarios = [
                generate_scenario(area, ScenarioParams(count=p), case_seed(config.seed, ri, pi, i))
                for i in range(config.samples)
            ]
            for alg in config.solvers:
                if alg == "exact" and ratio not in config.exact_ratios:
                    continue
                solve = {
                    "exact": lambda pts: solve_exact(pts, radius, solver_cfg),
                    "spiral": lambda pts: solve_spiral(pts, radius),
                    "kmeans": lambda pts: solve_kmeans(pts, radius, solver_cfg),
                }[alg]
                reports = []
                for i, scen in enumerate(scenarios):
                    if progress:
                        progress(f"{alg} R={ratio:g} p={p} sample {i + 1}/{config.samples}")
                    try:
                        if i == 0:
                            solve(scen.points)  # warm-up, timing discarded
                        sol = solve(scen.points)
                    except Exception as exc:  # noqa: BLE001 - itemized, not fatal
                        errors.append({"algorithm": alg, "R": ratio, "p": p, "sample": i, "error": str(exc)})
                        continue
                    if alg == "exact" and sol.budget_exceeded:
                        skipped.append({"algorithm": alg, "R": ratio, "p": p, "sample": i, "reason": "budget"})
                        continue
                    reports.append(evaluate(sol, scen))
                if reports:
                    rows.append(_aggregate(alg, ratio, p, epsilon, reports))
    if config.predictions_dir and config.dataset_dir:
        rows.extend(
            _proposed_rows(config, area, skipped, errors)
        )
    meta = {
        "clock": "time.perf_counter",
        "host": f"{platform.system()} {platform.machine()} python {platform.python_version()}",
        "kernel_backend": kernels.BACKEND,
        "seed": config.seed,
        "samples": config.samples,
    }
    return BenchReport(rows=rows, skipped=skipped, errors=errors, meta=meta)


def _proposed_rows(config, area, skipped, errors):
    """Score imported predictions against their manifest scenarios."""
    manifest = read_manifest(f"{config.dataset_dir}/manifest.tsv")
    by_case = {m.case_id: m for m in manifest}
    preds, pred_errors = import_predictions(config.predictions_dir)
    for case_id, msg in pred_errors:
        errors.append({"algorithm": "proposed", "case": case_id, "error": msg})
    grouped = {}
    for case_id, y_raw in preds:
        entry = by_case.get(case_id)
        if entry is None:
            errors.append({"algorithm": "proposed", "case": case_id, "error": "case missing from manifest"})
            continue
        scen = generate_scenario(area, ScenarioParams(count=entry.p), entry.seed)
        coverage = CoverageSpec.for_area(area, entry.ratio_r)
        eps = config.epsilon_for(entry.ratio_r) if entry.ratio_r in config.ratios else config.epsilons[0]
        corr = CorrectionConfig(epsilon=eps, threshold_theta=config.theta)
        sol = deploy(y_raw, area, coverage, corr)
        rep = evaluate(sol, scen, epsilon=eps)
        grouped.setdefault((entry.ratio_r, entry.p, eps), []).append(rep)
    return [
        _aggregate("proposed", ratio, p, eps, reps)
        for (ratio, p, eps), reps in sorted(grouped.items())
    ]
