"""Realization splits, metrics, and experiment runs."""

from .experiment import (
    METHODS, MULTI_METHODS, SINGLE_METHODS, MethodSpec, RunOptions, evaluate_realization,
    expand_methods, run_experiment,
)
from .metrics import accuracy, auc, mean_std, sampled_auc
from .report import MethodResult, MetricsReport, method_table_csv
from .split import Realization, SplitSpec, make_realization, split_sizes

__all__ = [
    "METHODS", "MULTI_METHODS", "SINGLE_METHODS", "MethodSpec", "RunOptions", "evaluate_realization",
    "expand_methods", "run_experiment", "accuracy", "auc", "mean_std", "sampled_auc", "MethodResult",
    "MetricsReport", "method_table_csv", "Realization", "SplitSpec", "make_realization", "split_sizes",
]
