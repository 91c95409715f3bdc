"""Aggregated metrics and their JSON / CSV renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from ..motifs.catalog import CATALOG
from .metrics import mean_std

VARIANT_ORDER = ("SMNB", "GSMNB-CL", "GSMNB-CN")


@dataclass
class MethodResult:
    method: str
    predictor: str  # canonical label, or "ALL" for multi-motif methods
    s_index: str
    auc: list[float]
    accuracy: list[float]

    @property
    def key(self) -> str:
        return self.method if self.predictor == "ALL" else f"{self.method}:{self.predictor}"

    def summary(self) -> dict[str, float]:
        ma, sa = mean_std(self.auc)
        mc, sc = mean_std(self.accuracy)
        return {"mean_auc": ma, "std_auc": sa, "mean_acc": mc, "std_acc": sc}

    def to_dict(self) -> dict:
        d = {"method": self.method, "predictor": self.predictor, "s_index": self.s_index,
             "auc": list(self.auc), "accuracy": list(self.accuracy), "realizations": len(self.auc)}
        d.update(self.summary())
        return d


@dataclass
class MetricsReport:
    results: list[MethodResult]
    metadata: dict = field(default_factory=dict)

    def get(self, key: str) -> MethodResult:
        for r in self.results:
            if r.key == key:
                return r
        raise KeyError(key)

    def to_dict(self) -> dict:
        return {"metadata": self.metadata, "results": [r.to_dict() for r in self.results]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        res = [MethodResult(r["method"], r["predictor"], r.get("s_index", ""), list(r["auc"]), list(r["accuracy"]))
               for r in d["results"]]
        return cls(res, dict(d.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "MetricsReport":
        return cls.from_dict(json.loads(text))

    def summary_csv(self) -> str:
        """One row per method with mean and std of AUC and accuracy."""
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["method", "predictor", "s_index", "realizations", "mean_auc", "std_auc", "mean_acc", "std_acc"])
        for r in self.results:
            s = r.summary()
            w.writerow([r.method, r.predictor, r.s_index, len(r.auc),
                        _fmt(s["mean_auc"]), _fmt(s["std_auc"]), _fmt(s["mean_acc"]), _fmt(s["std_acc"])])
        return out.getvalue()

    def predictor_table_csv(self, metric: str = "auc") -> str:
        """Predictors as rows, single-predictor variants as columns (mean and std each)."""
        _check_metric(metric)
        cells = {(r.predictor, r.method): r.summary() for r in self.results if r.predictor != "ALL"}
        variants = [v for v in VARIANT_ORDER if any(m == v for _, m in cells)]
        s_names = {r.predictor: r.s_index for r in self.results}
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["predictor", "s_index"] + [f"{v}_{suffix}" for v in variants for suffix in ("mean", "std")])
        for p in CATALOG:
            if not any((p.label, v) in cells for v in variants):
                continue
            row = [p.label, s_names.get(p.label, "")]
            for v in variants:
                s = cells.get((p.label, v))
                row += [_fmt(s[f"mean_{metric}"]), _fmt(s[f"std_{metric}"])] if s else ["", ""]
            w.writerow(row)
        return out.getvalue()


def method_table_csv(reports: dict[str, MetricsReport], metric: str = "auc") -> str:
    """Methods as rows, datasets as columns, from one report per dataset."""
    _check_metric(metric)
    names = list(reports)
    keys: list[str] = []
    for rep in reports.values():
        for r in rep.results:
            if r.key not in keys:
                keys.append(r.key)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["method"] + [f"{n}_{suffix}" for n in names for suffix in ("mean", "std")])
    for k in keys:
        row = [k]
        for n in names:
            try:
                s = reports[n].get(k).summary()
                row += [_fmt(s[f"mean_{metric}"]), _fmt(s[f"std_{metric}"])]
            except KeyError:
                row += ["", ""]
        w.writerow(row)
    return out.getvalue()


def _check_metric(metric: str) -> None:
    if metric not in ("auc", "acc"):
        raise ValueError(f"metric must be 'auc' or 'acc', got {metric!r}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"
