from .experiment import (
    CommandOutcome,
    ExperimentResult,
    ExperimentSpec,
    experiment_commands,
    load_generation_log,
    run_integration_experiment,
    score_generation_log,
)
from .krippendorff import NoVariationError, RatingMatrix, krippendorff_alpha
from .report import ReportInputs, emit_report, load_accuracy_csv, load_ratings_csv
from .stats import (
    AnovaResult,
    DegenerateVarianceError,
    TTestResult,
    ZeroVarianceError,
    f_sf,
    one_sample_t_test,
    one_way_anova,
    regularized_incomplete_beta,
    t_critical,
    t_two_tailed_p,
)

__all__ = [
    "AnovaResult",
    "CommandOutcome",
    "DegenerateVarianceError",
    "ExperimentResult",
    "ExperimentSpec",
    "NoVariationError",
    "RatingMatrix",
    "ReportInputs",
    "TTestResult",
    "ZeroVarianceError",
    "emit_report",
    "experiment_commands",
    "f_sf",
    "krippendorff_alpha",
    "load_accuracy_csv",
    "load_generation_log",
    "load_ratings_csv",
    "one_sample_t_test",
    "one_way_anova",
    "regularized_incomplete_beta",
    "run_integration_experiment",
    "score_generation_log",
    "t_critical",
    "t_two_tailed_p",
]
