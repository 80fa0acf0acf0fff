"""Experiment harness: config handling and the seeded Monte Carlo sweep.

Each trial generates a fresh instance from a child seed, runs the online
radius-selection method once (both the aggregated and the selected
estimator come from that single run) and the cross-validated lasso once,
and appends one CSV row per (trial, method).  Rows are flushed as they are
written, in trial order regardless of the worker pool schedule, so a
partial records.csv after a crash is still valid and two sweeps with the
same config and master seed differ at most in the timing column.
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    METHOD_AGGREGATE,
    METHOD_CV,
    METHOD_SELECT,
    ExperimentRecord,
    FwConfig,
    HedgeConfig,
)
from .datagen import DESIGNS, SyntheticSpec, gen_instance, trial_seed
from .hedge import default_learning_rate
from .hedge_fw import aggregate_estimator, default_grid, run_hedge_fw, select_estimator
from .lasso import cv_lasso, lambda_path
from .metrics import time_block, trial_metrics

CSV_HEADER = "trial,method,pred_error,resid_error,est_error,support_f1,wall_time_s,seed,error"


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved sweep configuration; n and p have no defaults."""

    n: int
    p: int
    s0: int = 5
    sigma: float = 0.1
    design: str = "gaussian_iid"
    rho: float = 0.0
    seed: int = 0
    trials: int = 50
    grid_size: int = 20
    eta: float | None = None  # None: sqrt(8 ln(grid_size) / n)
    dirac_tolerance: float = 0.01
    k_step: float = 2.0
    loss_cap: float | None = None
    cv_folds: int = 5
    output_dir: str = "results"
    emit_svg: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.grid_size < 2:
            raise ValueError("grid_size must be at least 2")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be at least 2")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.design not in DESIGNS:
            raise ValueError(f"unknown design {self.design!r}")
        # fail fast on bad spec fields before the sweep starts
        SyntheticSpec(self.n, self.p, self.s0, self.sigma, self.design, self.rho, 0)

    def resolved_eta(self) -> float:
        if self.eta is not None:
            return self.eta
        return default_learning_rate(self.grid_size, self.n)

    def hedge_config(self) -> HedgeConfig:
        return HedgeConfig(
            eta=self.resolved_eta(),
            dirac_tolerance=self.dirac_tolerance,
            loss_cap=self.loss_cap,
        )

    def fw_config(self) -> FwConfig:
        return FwConfig(k_step=self.k_step)


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_INT_KEYS = {"n", "p", "s0", "seed", "trials", "grid_size", "cv_folds", "threads"}
_FLOAT_KEYS = {"sigma", "rho", "dirac_tolerance", "k_step"}
_OPT_FLOAT_KEYS = {"eta", "loss_cap"}
_BOOL_KEYS = {"emit_svg"}
_STR_KEYS = {"design", "output_dir"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _OPT_FLOAT_KEYS:
            return None if raw.lower() in ("none", "auto", "") else float(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if key in _STR_KEYS:
            return raw
    except ValueError:
        raise ValueError(f"bad value for config key {key!r}: {raw!r}") from None
    raise ValueError(f"unknown config key {key!r}")


def read_config_file(path) -> dict:
    """key=value lines; '#' starts a comment; unknown keys are hard errors."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, raw = line.split("=", 1)
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _parse_value(key, raw)
    return values


def parse_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge a config file (if any) with override values; overrides win."""
    values = read_config_file(path) if path else {}
    for key, raw in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _parse_value(key, raw) if isinstance(raw, str) else raw
    missing = [k for k in ("n", "p") if k not in values]
    if missing:
        raise ValueError(f"missing required config field(s): {', '.join(missing)}")
    return ExperimentConfig(**values)


def format_config(config: ExperimentConfig) -> str:
    """key=value dump of the fully resolved config; reparses to itself."""
    lines = []
    for f in dataclasses.fields(ExperimentConfig):
        v = getattr(config, f.name)
        if f.name == "eta":
            v = config.resolved_eta()
        if v is None:
            v = "none"
        elif isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = f"{v:.17g}"
        lines.append(f"{f.name}={v}")
    return "\n".join(lines) + "\n"


def config_digest(config: ExperimentConfig) -> str:
    return hashlib.sha256(format_config(config).encode()).hexdigest()[:12]


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _record_to_row(r: ExperimentRecord) -> str:
    err = r.error.replace(",", ";").replace("\n", " ")
    return (
        f"{r.trial},{r.method},{_fmt(r.pred_error)},{_fmt(r.resid_error)},"
        f"{_fmt(r.est_error)},{_fmt(r.support_f1)},{_fmt(r.wall_time_s)},"
        f"{r.seed},{err}"
    )


def run_trial(config: ExperimentConfig, trial: int) -> list[ExperimentRecord]:
    """All three method records for one trial; failures become error rows."""
    seed = trial_seed(config.seed, trial)
    digest = config_digest(config)
    try:
        spec = SyntheticSpec(config.n, config.p, config.s0, config.sigma,
                             config.design, config.rho, seed)
        instance, truth = gen_instance(spec)
        grid = default_grid(instance, config.grid_size)
        hedge_cfg = config.hedge_config()
        fw_cfg = config.fw_config()

        output, t_hedge = time_block(
            lambda: run_hedge_fw(instance, grid, hedge_cfg, fw_cfg)
        )
        b_agg = aggregate_estimator(output)
        b_sel = select_estimator(output, config.dirac_tolerance).coefficients

        lgrid = lambda_path(instance, config.grid_size)
        cv, t_cv = time_block(
            lambda: cv_lasso(instance, lgrid, config.cv_folds, seed)
        )

        records = []
        # one timed online run serves both hedge estimators
        for method, b, t in (
            (METHOD_AGGREGATE, b_agg, t_hedge),
            (METHOD_SELECT, b_sel, t_hedge),
            (METHOD_CV, cv.final_beta, t_cv),
        ):
            m = trial_metrics(instance, truth, b, t)
            records.append(ExperimentRecord(
                trial=trial, method=method,
                pred_error=m.pred_error, resid_error=m.resid_error,
                est_error=m.est_error, support_f1=m.support_f1,
                wall_time_s=m.wall_time_s, seed=seed,
                config_digest=digest,
            ))
        return records
    except Exception as exc:  # record and continue the sweep
        nan = float("nan")
        return [
            ExperimentRecord(
                trial=trial, method=method,
                pred_error=nan, resid_error=nan, est_error=nan,
                support_f1=nan, wall_time_s=nan, seed=seed,
                config_digest=digest, error=f"{type(exc).__name__}: {exc}",
            )
            for method in (METHOD_AGGREGATE, METHOD_SELECT, METHOD_CV)
        ]


def run_experiment(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run the sweep, writing records.csv incrementally and summary.txt at the end."""
    os.makedirs(config.output_dir, exist_ok=True)
    csv_path = os.path.join(config.output_dir, "records.csv")
    all_records: list[ExperimentRecord] = []
    with open(csv_path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.flush()
        if config.threads == 1:
            for trial in range(config.trials):
                records = run_trial(config, trial)
                for r in records:
                    fh.write(_record_to_row(r) + "\n")
                    fh.flush()
                all_records.extend(records)
        else:
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                futures = [
                    pool.submit(run_trial, config, trial)
                    for trial in range(config.trials)
                ]
                # consume in trial order so the file is schedule independent
                for fut in futures:
                    records = fut.result()
                    for r in records:
                        fh.write(_record_to_row(r) + "\n")
                        fh.flush()
                    all_records.extend(records)

    summary = summarize_records(config, all_records)
    with open(os.path.join(config.output_dir, "summary.txt"), "w") as fh:
        fh.write(summary)
    if config.emit_svg:
        from .svgplot import emit_svg_histograms

        emit_svg_histograms(all_records, config.output_dir)
    return all_records


def _stats_line(name: str, values: np.ndarray) -> str:
    if values.size == 0:
        return f"  {name}: no successful trials\n"
    q25, med, q75 = np.percentile(values, [25, 50, 75])
    return (
        f"  {name}: median={med:.6g} mean={values.mean():.6g} "
        f"iqr={q75 - q25:.6g} (n={values.size})\n"
    )


def summarize_records(config: ExperimentConfig, records: list[ExperimentRecord]) -> str:
    """Per-method medians, means, interquartile ranges, and the time ratio."""
    by_method: dict[str, list[ExperimentRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    out = [f"config_digest: {config_digest(config)}"]
    failures = sum(1 for r in records if r.error)
    out.append(f"records: {len(records)} ({failures} failed)")
    for method in (METHOD_AGGREGATE, METHOD_SELECT, METHOD_CV):
        ok = [r for r in by_method.get(method, []) if not r.error]
        out.append(f"{method}:")
        out.append(_stats_line("pred_error", np.array([r.pred_error for r in ok])).rstrip("\n"))
        out.append(_stats_line("wall_time_s", np.array([r.wall_time_s for r in ok])).rstrip("\n"))
    hedge_total = sum(
        r.wall_time_s for r in by_method.get(METHOD_AGGREGATE, []) if not r.error
    )
    cv_total = sum(r.wall_time_s for r in by_method.get(METHOD_CV, []) if not r.error)
    out.append(f"total wall time (s): hedge_fw={hedge_total:.6g} cv_lasso={cv_total:.6g}")
    if cv_total > 0:
        out.append(f"hedge_to_cv_time_ratio: {hedge_total / cv_total:.6g}")
    out.append("")
    out.append("resolved config:")
    out.append(format_config(config).rstrip("\n"))
    return "\n".join(out) + "\n"
