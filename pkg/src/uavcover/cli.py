"""Command-line front end.

Subcommands: gen, solve, correct, loss, dataset, deploy, bench, report.
Exit codes: 0 success, 1 validation error, 2 budget exhaustion (partial
results are still written).
"""

import argparse
import json
import os
import sys

import numpy as np

from uavcover import bench as bench_mod
from uavcover import gmxio
from uavcover.correction import CorrectionConfig, correct, sparse_to_coords
from uavcover.pipeline import deploy, evaluate, export_dataset, import_predictions
from uavcover.poolloss import pool_loss
from uavcover.scenario import (
    AreaSpec,
    ConfigError,
    CoverageSpec,
    ScenarioParams,
    discretize,
    generate_scenario,
)
from uavcover.solvers import SolverConfig, solve_exact, solve_kmeans, solve_spiral

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BUDGET = 2


def _float_list(text):
    return tuple(float(t) for t in text.split(","))


def _int_list(text):
    return tuple(int(t) for t in text.split(","))


def _add_area_flags(sub, default_n=256):
    sub.add_argument("--side-d", type=float, default=1000.0, help="area side length (m)")
    sub.add_argument("--grid-n", type=int, default=default_n, help="grid cells per side")


def _solution_dict(sol, report=None):
    out = {
        "algorithm": sol.algorithm,
        "uav_count": sol.uav_count,
        "radius_r": sol.radius_r,
        "wall_time_s": sol.wall_time_s,
        "optimal": sol.optimal,
        "budget_exceeded": sol.budget_exceeded,
        "centers": [[float(x), float(y)] for x, y in sol.centers],
    }
    if report is not None:
        out["coverage_pct"] = report.coverage_pct
        out["p"] = report.p
    return out


def cmd_gen(args):
    area = AreaSpec(side_d=args.side_d, grid_n=args.grid_n)
    params = ScenarioParams(
        count=args.p,
        cluster_min=args.cluster_min,
        cluster_max=args.cluster_max,
        sigma_frac=args.sigma_frac,
        outlier_frac=args.outlier_frac,
    )
    scen = generate_scenario(area, params, args.seed)
    gmxio.write_points(args.out, scen.points, area.side_d)
    if args.matrix_out:
        gmxio.write_matrix(args.matrix_out, discretize(scen))
    print(f"wrote {scen.p} points to {args.out}")
    return EXIT_OK


def cmd_solve(args):
    pts, side_d = gmxio.read_points(args.points)
    radius = args.radius if args.radius is not None else side_d / args.ratio
    cfg = SolverConfig(
        time_budget_s=args.budget,
        kmeans_restarts=args.restarts,
        kmeans_max_iter=args.max_iter,
        rng_seed=args.seed,
    )
    if args.alg == "exact":
        sol = solve_exact(pts, radius, cfg)
    elif args.alg == "spiral":
        sol = solve_spiral(pts, radius)
    else:
        sol = solve_kmeans(pts, radius, cfg)
    area = AreaSpec(side_d=side_d, grid_n=args.grid_n)
    scen_like = _ScenarioView(pts, area)
    report = evaluate(sol, scen_like)
    payload = _solution_dict(sol, report)
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_BUDGET if sol.budget_exceeded else EXIT_OK


class _ScenarioView:
    """Adapter exposing a bare point set with the UEScenario surface."""

    def __init__(self, points, area):
        self.points = points
        self.area = area
        self.p = points.shape[0]


def cmd_correct(args):
    matrix = gmxio.read_matrix(args.matrix)
    coords = sparse_to_coords(matrix, args.theta)
    merged = correct(coords, args.epsilon, shuffle_seed=args.shuffle_seed)
    n = matrix.shape[0]
    gmxio.write_points(args.out, merged, float(n))
    print(f"{coords.shape[0]} raw -> {merged.shape[0]} corrected coordinates ({args.out})")
    return EXIT_OK


def cmd_loss(args):
    a = gmxio.read_matrix(args.template)
    b = gmxio.read_matrix(args.generated)
    schedule = list(args.filters) if args.filters else None
    result = pool_loss(a, b, schedule)
    if args.json:
        print(json.dumps({"per_level": result.per_level, "total": result.total}))
    else:
        print(f"{'filter':>8} {'loss':>20}")
        for f, level in result.per_level:
            print(f"{f:>8} {level:>20}")
        print(f"{'total':>8} {result.total:>20}")
    return EXIT_OK


def cmd_dataset(args):
    area = AreaSpec(side_d=args.side_d, grid_n=args.grid_n)
    params = ScenarioParams(count=args.p)
    scenarios = [
        generate_scenario(area, params, bench_mod.case_seed(args.seed, 0, 0, i))
        for i in range(args.cases)
    ]
    cfg = SolverConfig(time_budget_s=args.budget, rng_seed=args.seed)
    rows = export_dataset(scenarios, args.ratio, args.out, template=args.template, solver_config=cfg)
    fallbacks = sum(1 for r in rows if args.template == "exact" and r.template_alg != "exact")
    print(f"exported {len(rows)} cases to {args.out} ({fallbacks} budget fallbacks)")
    return EXIT_BUDGET if fallbacks else EXIT_OK


def cmd_deploy(args):
    area = AreaSpec(side_d=args.side_d, grid_n=args.grid_n)
    manifest = gmxio.read_manifest(os.path.join(args.dataset, "manifest.tsv"))
    by_case = {m.case_id: m for m in manifest}
    preds, errors = import_predictions(args.pred)
    reports = []
    for case_id, y_raw in preds:
        entry = by_case.get(case_id)
        if entry is None:
            errors.append((case_id, "case missing from manifest"))
            continue
        scen = generate_scenario(area, ScenarioParams(count=entry.p), entry.seed)
        coverage = CoverageSpec.for_area(area, entry.ratio_r)
        corr = CorrectionConfig(epsilon=args.epsilon, threshold_theta=args.theta)
        sol = deploy(y_raw, area, coverage, corr)
        rep = evaluate(sol, scen, epsilon=args.epsilon)
        reports.append((case_id, rep))
    payload = {
        "reports": [{"case_id": cid, **rep.to_dict()} for cid, rep in reports],
        "errors": [{"case_id": cid, "error": msg} for cid, msg in errors],
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_VALIDATION if errors and not reports else EXIT_OK


def cmd_bench(args):
    if args.config:
        config = bench_mod.BenchConfig.from_json(args.config)
    else:
        config = bench_mod.BenchConfig(
            ratios=args.ratios,
            ue_counts=args.ue,
            epsilons=args.eps,
            samples=args.samples,
            seed=args.seed,
            solvers=args.solvers,
            exact_ratios=args.exact_ratios,
            exact_budget_s=args.exact_budget,
            side_d=args.side_d,
            grid_n=args.grid_n,
            dataset_dir=args.dataset,
            predictions_dir=args.pred,
        )
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    report = bench_mod.run_bench(config, progress=progress)
    csv_path = args.out_prefix + ".csv"
    json_path = args.out_prefix + ".json"
    os.makedirs(os.path.dirname(csv_path) or ".", exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        fh.write(report.to_csv())
    with open(json_path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
        fh.write("\n")
    print(f"wrote {csv_path} and {json_path} ({len(report.rows)} rows, "
          f"{len(report.skipped)} budget skips, {len(report.errors)} errors)")
    return EXIT_OK


def cmd_report(args):
    if args.input.endswith(".json"):
        with open(args.input) as fh:
            data = json.load(fh)
        rows = data["rows"]
    else:
        import csv as _csv

        with open(args.input, newline="") as fh:
            reader = _csv.DictReader(fh)
            rows = [
                {
                    "algorithm": r["algorithm"],
                    "ratio_r": float(r["R"]),
                    "p": int(r["p"]),
                    "epsilon": float(r["epsilon"]) if r["epsilon"] else None,
                    "samples": int(r["samples"]),
                    "mean_time_s": float(r["mean_time_s"]),
                    "sd_time_s": float(r["sd_time_s"]),
                    "mean_coverage_pct": float(r["mean_coverage_pct"]),
                    "mean_uavs": float(r["mean_uavs"]),
                    "sd_uavs": float(r["sd_uavs"]),
                    "mean_blur_factor": float(r["mean_blur_factor"]) if r["mean_blur_factor"] else None,
                }
                for r in reader
            ]
    fmt = "{:>9} {:>5} {:>6} {:>8} {:>8} {:>12} {:>10} {:>10} {:>9}"
    print(fmt.format("algorithm", "R", "p", "eps", "samples", "mean_time_s", "cov_pct", "mean_uavs", "blur"))
    for r in sorted(rows, key=lambda r: (r["ratio_r"], r["p"], r["algorithm"])):
        print(
            fmt.format(
                r["algorithm"],
                f"{r['ratio_r']:g}",
                r["p"],
                "" if r["epsilon"] is None else f"{r['epsilon']:g}",
                r["samples"],
                f"{r['mean_time_s']:.5f}",
                f"{r['mean_coverage_pct']:.2f}",
                f"{r['mean_uavs']:.2f}",
                "" if r["mean_blur_factor"] is None else f"{r['mean_blur_factor']:.2f}",
            )
        )
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract reserves 2 for budget
    exhaustion, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="uavcover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a clustered UE scenario")
    _add_area_flags(p)
    p.add_argument("--p", type=int, required=True, help="number of UEs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cluster-min", type=int, default=3)
    p.add_argument("--cluster-max", type=int, default=8)
    p.add_argument("--sigma-frac", type=float, default=0.05)
    p.add_argument("--outlier-frac", type=float, default=0.05)
    p.add_argument("--out", required=True, help="output .pts path")
    p.add_argument("--matrix-out", help="optional discretized .gmx output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run one solver on one scenario")
    p.add_argument("--alg", choices=("exact", "spiral", "kmeans"), required=True)
    p.add_argument("--points", required=True, help="input .pts path")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--ratio", type=float, help="coverage ratio R = D / r")
    group.add_argument("--radius", type=float, help="explicit disk radius (m)")
    p.add_argument("--budget", type=float, default=30.0, help="exact-solver time budget (s)")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-n", type=int, default=256)
    p.add_argument("--out", help="also write the JSON result here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("correct", help="de-blur a generated matrix to coordinates")
    p.add_argument("--matrix", required=True, help="input .gmx path")
    p.add_argument("--epsilon", type=float, required=True, help="merge radius (cells)")
    p.add_argument("--theta", type=float, default=0.5, help="binarization threshold")
    p.add_argument("--shuffle-seed", type=int, default=None, help="randomized pop order")
    p.add_argument("--out", required=True, help="output .pts path (grid units)")
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("loss", help="multi-scale pooling loss between two matrices")
    p.add_argument("template", help="template .gmx")
    p.add_argument("generated", help="generated .gmx")
    p.add_argument("--filters", type=_int_list, default=None, help="e.g. 1,2,4,8")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_loss)

    p = sub.add_parser("dataset", help="export paired UE/template matrices")
    _add_area_flags(p)
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--template", choices=("exact", "spiral"), default="exact")
    p.add_argument("--budget", type=float, default=30.0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("deploy", help="score predicted matrices against their scenarios")
    _add_area_flags(p)
    p.add_argument("--dataset", required=True, help="dataset directory with manifest.tsv")
    p.add_argument("--pred", required=True, help="directory of case_<k>.Yhat.gmx files")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(func=cmd_deploy)

    p = sub.add_parser("bench", help="run the benchmark grid, write CSV + JSON")
    _add_area_flags(p)
    p.add_argument("--ratios", type=_float_list, default=(2.0, 4.0, 6.0))
    p.add_argument("--ue", type=_int_list, default=(400, 1000))
    p.add_argument("--eps", type=_float_list, default=(160.0, 60.0, 40.0))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solvers", type=lambda s: tuple(s.split(",")), default=("exact", "spiral", "kmeans"))
    p.add_argument("--exact-ratios", type=_float_list, default=(2.0,))
    p.add_argument("--exact-budget", type=float, default=30.0)
    p.add_argument("--dataset", default=None, help="dataset dir for scoring predictions")
    p.add_argument("--pred", default=None, help="predictions dir (adds 'proposed' rows)")
    p.add_argument("--config", default=None, help="JSON config file (overrides flags)")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="pretty-print a bench CSV/JSON")
    p.add_argument("input")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, gmxio.ParseError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
