"""Command-line front end.

Subcommands:
  run    Monte Carlo sweep comparing the online method against CV lasso.
  gen    Generate a synthetic instance and write it to a text file.
  solve  Run both methods once on an instance file and print the results.
  plot   Render SVG histograms from an existing records.csv.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .core import METHOD_AGGREGATE, METHOD_CV, METHOD_SELECT, ExperimentRecord
from .datagen import DESIGNS, SyntheticSpec, gen_instance, read_instance, write_instance
from .harness import ExperimentConfig, format_config, parse_config, run_experiment
from .hedge import default_learning_rate
from .hedge_fw import aggregate_estimator, default_grid, run_hedge_fw, select_estimator
from .lasso import cv_lasso, lambda_path
from .metrics import prediction_error, residual_error, time_block
from .svgplot import emit_svg_histograms

_CONFIG_FLAGS = [
    ("--n", "n"), ("--p", "p"), ("--s0", "s0"), ("--sigma", "sigma"),
    ("--design", "design"), ("--rho", "rho"), ("--seed", "seed"),
    ("--trials", "trials"), ("--grid-size", "grid_size"), ("--eta", "eta"),
    ("--dirac-tolerance", "dirac_tolerance"), ("--k-step", "k_step"),
    ("--loss-cap", "loss_cap"), ("--cv-folds", "cv_folds"),
    ("--output-dir", "output_dir"), ("--emit-svg", "emit_svg"),
    ("--threads", "threads"),
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hedgelasso",
        description="Online l1-radius selection for the lasso vs cross-validation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte Carlo sweep")
    p_run.add_argument("--config", help="key=value config file")
    for flag, key in _CONFIG_FLAGS:
        p_run.add_argument(flag, dest=f"cfg_{key}", metavar=key.upper())
    p_run.add_argument("--paper-scale", action="store_true",
                       help="use 1000 trials instead of the configured count")
    p_run.add_argument("--print-config", action="store_true",
                       help="print the fully resolved config and exit")

    p_gen = sub.add_parser("gen", help="write a synthetic instance file")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=int, required=True)
    p_gen.add_argument("--s0", type=int, default=5)
    p_gen.add_argument("--sigma", type=float, default=0.1)
    p_gen.add_argument("--design", choices=DESIGNS, default="gaussian_iid")
    p_gen.add_argument("--rho", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)

    p_solve = sub.add_parser("solve", help="run both methods on an instance file")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--grid-size", type=int, default=20)
    p_solve.add_argument("--eta", type=float, default=None)
    p_solve.add_argument("--dirac-tolerance", type=float, default=0.01)
    p_solve.add_argument("--k-step", type=float, default=2.0)
    p_solve.add_argument("--cv-folds", type=int, default=5)

    p_plot = sub.add_parser("plot", help="render SVG histograms from records.csv")
    p_plot.add_argument("--records", required=True)
    p_plot.add_argument("--out-dir", required=True)
    return parser


def _cmd_run(args) -> int:
    overrides = {}
    for _, key in _CONFIG_FLAGS:
        v = getattr(args, f"cfg_{key}")
        if v is not None:
            overrides[key] = v
    config = parse_config(args.config, overrides)
    if args.paper_scale:
        config = dataclasses.replace(config, trials=1000)
    if args.print_config:
        sys.stdout.write(format_config(config))
        return 0
    records = run_experiment(config)
    failures = sum(1 for r in records if r.error)
    print(f"wrote {len(records)} records to {config.output_dir}/records.csv "
          f"({failures} failed)")
    print(f"summary: {config.output_dir}/summary.txt")
    return 0


def _cmd_gen(args) -> int:
    spec = SyntheticSpec(args.n, args.p, args.s0, args.sigma, args.design,
                         args.rho, args.seed)
    instance, truth = gen_instance(spec)
    write_instance(args.out, instance, truth, args.seed)
    print(f"wrote {args.out}: n={instance.n} p={instance.p} s0={truth.s0} "
          f"sigma={truth.sigma:g} seed={args.seed}")
    return 0


def _cmd_solve(args) -> int:
    from .core import FwConfig, HedgeConfig

    instance, truth, seed = read_instance(args.instance)
    grid = default_grid(instance, args.grid_size)
    eta = args.eta if args.eta is not None else default_learning_rate(grid.size, instance.n)
    hedge_cfg = HedgeConfig(eta=eta, dirac_tolerance=args.dirac_tolerance)
    fw_cfg = FwConfig(k_step=args.k_step)

    output, t_hedge = time_block(lambda: run_hedge_fw(instance, grid, hedge_cfg, fw_cfg))
    selected = select_estimator(output, args.dirac_tolerance)
    b_agg = aggregate_estimator(output)

    lgrid = lambda_path(instance, args.grid_size)
    cv, t_cv = time_block(lambda: cv_lasso(instance, lgrid, args.cv_folds, seed))

    print(f"instance: n={instance.n} p={instance.p} s0={truth.s0} sigma={truth.sigma:g}")
    print(f"radius grid: [{grid.radii[0]:.6g}, {grid.radii[-1]:.6g}] "
          f"({grid.size} points), eta={eta:.6g}")
    print(f"hedge_fw ({t_hedge * 1e3:.1f} ms): selected radius {output.radii[selected.index]:.6g} "
          f"(weight {output.weights[selected.index]:.4g}, dirac={selected.is_dirac})")
    for name, b in ((METHOD_SELECT, selected.coefficients), (METHOD_AGGREGATE, b_agg)):
        print(f"  {name}: pred_error={prediction_error(instance, truth, b):.6g} "
              f"resid_error={residual_error(instance, b):.6g} "
              f"nonzeros={int(np.sum(np.abs(b) > 1e-6))}")
    print(f"cv_lasso ({t_cv * 1e3:.1f} ms): best lambda {cv.best_lambda:.6g}")
    b = cv.final_beta
    print(f"  {METHOD_CV}: pred_error={prediction_error(instance, truth, b):.6g} "
          f"resid_error={residual_error(instance, b):.6g} "
          f"nonzeros={int(np.sum(np.abs(b) > 1e-6))}")
    return 0


def _read_records_csv(path) -> list[ExperimentRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            row = dict(zip(cols, parts))
            records.append(ExperimentRecord(
                trial=int(row["trial"]), method=row["method"],
                pred_error=float(row["pred_error"]),
                resid_error=float(row["resid_error"]),
                est_error=float(row["est_error"]),
                support_f1=float(row["support_f1"]),
                wall_time_s=float(row["wall_time_s"]),
                seed=int(row["seed"]), error=row.get("error", ""),
            ))
    return records


def _cmd_plot(args) -> int:
    records = _read_records_csv(args.records)
    paths = emit_svg_histograms(records, args.out_dir)
    for p in paths:
        print(f"wrote {p}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "gen": _cmd_gen, "solve": _cmd_solve, "plot": _cmd_plot}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
