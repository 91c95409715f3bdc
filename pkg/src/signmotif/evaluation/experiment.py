"""Repeated-realization experiments: mask, score, train, test, aggregate."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .. import __version__
from ..classifier import TrainConfig, make_classifier
from ..graph import SignedGraph, mask, stats
from ..motifs.catalog import CATALOG, DEFAULT_S_INDEX, PredictorId, get_predictor, s_name
from ..motifs.index import MotifIndex
from ..scoring import DegeneratePrior, compute_prior, method_features
from .metrics import accuracy, auc, sampled_auc
from .report import MethodResult, MetricsReport
from .split import Realization, SplitSpec, make_realization

SINGLE_METHODS = ("SMNB", "GSMNB-CL", "GSMNB-CN")
MULTI_METHODS = ("GMMNB", "FGMNB")
METHODS = SINGLE_METHODS + MULTI_METHODS


@dataclass(frozen=True)
class MethodSpec:
    method: str
    predictor: PredictorId | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; valid: {', '.join(METHODS)}")
        if (self.method in SINGLE_METHODS) != (self.predictor is not None):
            raise ValueError(f"method {self.method} {'needs' if self.predictor is None else 'takes no'} predictor")

    @property
    def key(self) -> str:
        return self.method if self.predictor is None else f"{self.method}:{self.predictor.label}"

    @classmethod
    def parse(cls, text: str, s_index: dict[str, str] | None = None) -> "MethodSpec":
        """``FGMNB``, ``GMMNB`` or ``<variant>:<predictor>`` (label or S-name)."""
        method, _, pred = text.partition(":")
        method = method.strip().upper()
        if method in MULTI_METHODS:
            return cls(method)
        if method not in SINGLE_METHODS:
            raise ValueError(f"unknown method {text!r}; valid: {', '.join(METHODS)}")
        if not pred:
            raise ValueError(f"method {method} needs a predictor, e.g. {method}:T+-")
        return cls(method, get_predictor(pred, s_index))


def expand_methods(methods: Iterable[str], predictors: Sequence[str] | str = "all",
                   s_index: dict[str, str] | None = None) -> list[MethodSpec]:
    """Cross single-predictor variants with ``predictors``; multi-motif methods pass through."""
    if isinstance(predictors, str):
        predictors = [predictors]
    if [p.lower() for p in predictors] == ["all"]:
        preds = list(CATALOG)
    else:
        preds = [get_predictor(p, s_index) for p in predictors]
    out: list[MethodSpec] = []
    for m in methods:
        if ":" in m or m.strip().upper() in MULTI_METHODS:
            out.append(MethodSpec.parse(m, s_index))
        elif m.strip().upper() in SINGLE_METHODS:
            out.extend(MethodSpec(m.strip().upper(), p) for p in preds)
        else:
            raise ValueError(f"unknown method {m!r}; valid: {', '.join(METHODS)}")
    seen = set()
    return [s for s in out if not (s.key in seen or seen.add(s.key))]


@dataclass(frozen=True)
class RunOptions:
    induced: bool = False
    classifier: str = "internal"
    # replace training labels by fair coin flips; a leakage canary
    shuffle_train_labels: bool = False
    # None for exact AUC, else the number of sampled comparisons
    auc_samples: int | None = None


def evaluate_realization(graph: SignedGraph, real: Realization, methods: Sequence[MethodSpec],
                         train_config: TrainConfig, options: RunOptions = RunOptions()) -> dict[str, tuple[float, float]]:
    """``{method key: (auc, accuracy)}`` for one realization."""
    view = mask(graph, real.hidden)
    try:
        prior = compute_prior(view)
    except DegeneratePrior as exc:
        raise DegeneratePrior(f"realization {real.index}: {exc}") from None
    index = MotifIndex(view, induced=options.induced)
    train_ids, train_y = real.train_set()
    test_ids, test_y = real.test_set()
    ev_train = index.link_evidence(train_ids)
    ev_test = index.link_evidence(test_ids)
    if options.shuffle_train_labels:
        rng = np.random.default_rng([*real.seed, 1])
        train_y = np.where(rng.random(train_y.size) < 0.5, 1, -1)
        if np.all(train_y == train_y[0]):
            train_y[0] = -train_y[0]
    out = {}
    for spec in methods:
        X_train = method_features(ev_train, prior, spec.method, spec.predictor)
        X_test = method_features(ev_test, prior, spec.method, spec.predictor)
        clf = make_classifier(options.classifier, train_config).fit(X_train, train_y)
        p = clf.predict_proba(X_test)
        pos, neg = p[test_y > 0], p[test_y < 0]
        if options.auc_samples:
            a = sampled_auc(pos, neg, options.auc_samples, np.random.default_rng([*real.seed, 2]))
        else:
            a = auc(pos, neg)
        out[spec.key] = (a, accuracy(np.where(p >= 0.5, 1, -1), test_y))
    return out


def default_threads() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


def run_experiment(graph: SignedGraph, methods, spec: SplitSpec = SplitSpec(),
                   train_config: TrainConfig = TrainConfig(), options: RunOptions = RunOptions(),
                   threads: int | None = None, dataset: str = "", s_index: dict[str, str] | None = None,
                   progress: Callable[[int], None] | None = None) -> MetricsReport:
    """Run every method on ``spec.realizations`` realizations and aggregate.

    Evidence is computed once per realization and shared by all methods.
    Results are gathered by realization index, so the report does not
    depend on ``threads``.
    """
    if isinstance(methods, (str, MethodSpec)):
        methods = [methods]
    methods = [m if isinstance(m, MethodSpec) else MethodSpec.parse(m, s_index) for m in methods]
    if not methods:
        raise ValueError("no methods selected")
    # fail fast on split preconditions before spawning work
    make_realization(graph, spec, 0)

    def one(i: int):
        res = evaluate_realization(graph, make_realization(graph, spec, i), methods, train_config, options)
        if progress is not None:
            progress(i)
        return res

    n_threads = threads or default_threads()
    if n_threads == 1:
        per_real = [one(i) for i in range(spec.realizations)]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            per_real = list(pool.map(one, range(spec.realizations)))

    mapping = s_index or DEFAULT_S_INDEX
    results = []
    for m in methods:
        values = [r[m.key] for r in per_real]
        results.append(MethodResult(
            method=m.method,
            predictor=m.predictor.label if m.predictor else "ALL",
            s_index=s_name(m.predictor, mapping) if m.predictor else "",
            auc=[v[0] for v in values],
            accuracy=[v[1] for v in values],
        ))
    st = stats(graph)
    metadata = {
        "dataset": dataset,
        "graph": st.as_dict(),
        "split": asdict(spec),
        "train": asdict(train_config),
        "options": asdict(options),
        "s_index": dict(mapping),
        "version": __version__,
    }
    return MetricsReport(results, metadata)
