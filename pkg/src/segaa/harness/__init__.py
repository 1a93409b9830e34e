"""Training loops, the experiment matrix, metrics, and report emission."""

from .experiment import (
    ExperimentPlan,
    MatrixResult,
    RunSpec,
    evaluate_cascade,
    override_plan,
    paper_matrix,
    run_matrix,
    run_name,
)
from .metrics import (
    accuracy_from_confusion,
    confusion_matrix,
    evaluate,
    target_metrics,
    weighted_prf,
)
from .report import emit_report
from .train import NumericError, make_optimizer, to_arrays, train

__all__ = [
    "ExperimentPlan",
    "MatrixResult",
    "NumericError",
    "RunSpec",
    "accuracy_from_confusion",
    "confusion_matrix",
    "emit_report",
    "evaluate",
    "evaluate_cascade",
    "make_optimizer",
    "override_plan",
    "paper_matrix",
    "run_matrix",
    "run_name",
    "target_metrics",
    "to_arrays",
    "train",
]
