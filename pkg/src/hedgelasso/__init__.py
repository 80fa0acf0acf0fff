"""Online l1-radius selection for the lasso via exponential-weights
aggregation of per-radius stochastic Frank-Wolfe learners, with a
cross-validated coordinate-descent lasso baseline and a Monte Carlo
benchmark harness."""

from .core import (
    METHOD_AGGREGATE,
    METHOD_CV,
    METHOD_SELECT,
    METHODS,
    CandidateGrid,
    ExperimentRecord,
    FwConfig,
    GroundTruth,
    HedgeConfig,
    RegressionInstance,
    validate_instance,
)
from .datagen import (
    SyntheticSpec,
    gen_instance,
    gen_signal,
    read_instance,
    trial_seed,
    write_instance,
)
from .harness import ExperimentConfig, parse_config, run_experiment
from .hedge import HedgeState, default_learning_rate, hedge_init, hedge_update, is_dirac
from .hedge_fw import (
    HedgeFwOutput,
    SelectedExpert,
    aggregate_estimator,
    default_grid,
    run_hedge_fw,
    select_estimator,
)
from .lasso import (
    CvResult,
    LambdaGrid,
    cv_lasso,
    equivalent_radius,
    kfold_split,
    lambda_path,
    lasso_cd,
    soft_threshold,
)
from .metrics import (
    TrialMetrics,
    estimation_error,
    prediction_error,
    residual_error,
    support_f1,
    time_block,
)

__version__ = "0.1.0"

__all__ = [
    "METHOD_AGGREGATE", "METHOD_CV", "METHOD_SELECT", "METHODS",
    "CandidateGrid", "ExperimentRecord", "FwConfig", "GroundTruth",
    "HedgeConfig", "RegressionInstance", "validate_instance",
    "SyntheticSpec", "gen_instance", "gen_signal", "read_instance",
    "trial_seed", "write_instance",
    "ExperimentConfig", "parse_config", "run_experiment",
    "HedgeState", "default_learning_rate", "hedge_init", "hedge_update", "is_dirac",
    "HedgeFwOutput", "SelectedExpert", "aggregate_estimator", "default_grid",
    "run_hedge_fw", "select_estimator",
    "CvResult", "LambdaGrid", "cv_lasso", "equivalent_radius", "kfold_split",
    "lambda_path", "lasso_cd", "soft_threshold",
    "TrialMetrics", "estimation_error", "prediction_error", "residual_error",
    "support_f1", "time_block",
]
