"""Naive Bayes likelihood scores built from per-entity predictor counts.

For a target pair ``(A, B)`` and predictor ``S``, every entity ``M`` forming
``S`` with the pair contributes ``ln a + ln((pos + 1) / (neg + 1))`` where
``a = f- / f+`` is the network prior and ``pos, neg`` are the entity's counts
under the chosen variant. Natural logs throughout.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .graph import View
from .motifs.catalog import CATALOG, PredictorId
from .motifs.counting import EntityCounts, count_cl, count_cn, count_plain, enumerate_entities
from .motifs.index import Evidence

VARIANTS = ("SMNB", "GSMNB-CL", "GSMNB-CN")


class DegeneratePrior(ValueError):
    """The known signs of a view lack one of the two classes."""


@dataclass(frozen=True)
class Prior:
    f_plus: float
    f_minus: float

    @property
    def a(self) -> float:
        return self.f_minus / self.f_plus

    @property
    def log_a(self) -> float:
        return math.log(self.f_minus) - math.log(self.f_plus)

    @classmethod
    def from_counts(cls, n_pos: int, n_neg: int) -> "Prior":
        if n_pos <= 0 or n_neg <= 0:
            raise DegeneratePrior(
                f"prior ratio undefined: {n_pos} known positive and {n_neg} known negative links")
        total = n_pos + n_neg
        return cls(n_pos / total, n_neg / total)


def compute_prior(view: View) -> Prior:
    """Sign fractions over the links whose sign is known in ``view``."""
    signs = np.asarray(view.signs)
    return Prior.from_counts(int(np.count_nonzero(signs > 0)), int(np.count_nonzero(signs < 0)))


def smoothed_ratio(counts: EntityCounts) -> float:
    pos, neg = counts
    return (pos + 1) / (neg + 1)


def log_ratio(counts: EntityCounts) -> float:
    """ln of :func:`smoothed_ratio`, as a difference so swapping pos and neg negates it exactly."""
    pos, neg = counts
    return math.log(pos + 1) - math.log(neg + 1)


def check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; valid: {', '.join(VARIANTS)}")
    return variant


@dataclass(frozen=True)
class LinkScore:
    value: float
    entity_count: int


@dataclass(frozen=True)
class FeatureVector:
    components: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.components)

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=float)


def entity_evidence(view: View, target, predictor: PredictorId, variant: str,
                    induced: bool = False) -> list[EntityCounts]:
    """Counts of every entity of ``predictor`` around ``target`` under ``variant``.

    Entities are visited in sorted order so downstream sums are reproducible.
    """
    check_variant(variant)
    out = []
    for ent in sorted(enumerate_entities(view, target, predictor, induced), key=lambda e: e.nodes):
        if variant == "SMNB":
            out.append(count_plain(view, predictor, ent, exclude=target, induced=induced))
        elif variant == "GSMNB-CL":
            out.append(count_cl(view, predictor, ent, target, induced=induced))
        else:
            out.append(count_cn(view, predictor, ent, target, induced=induced))
    return out


def single_motif_score(view: View, target, predictor: PredictorId, variant: str = "GSMNB-CL",
                       prior: Prior | None = None, induced: bool = False) -> LinkScore:
    if prior is None:
        prior = compute_prior(view)
    counts = entity_evidence(view, target, predictor, variant, induced)
    if not counts:
        return LinkScore(0.0, 0)
    value = len(counts) * prior.log_a + sum(log_ratio(c) for c in counts)
    return LinkScore(value, len(counts))


def gmmnb_score(view: View, target, variant: str = "GSMNB-CL", prior: Prior | None = None,
                induced: bool = False) -> LinkScore:
    """Sum of the nine single-predictor scores."""
    if prior is None:
        prior = compute_prior(view)
    parts = [single_motif_score(view, target, p, variant, prior, induced) for p in CATALOG]
    return LinkScore(sum(s.value for s in parts), sum(s.entity_count for s in parts))


def feature_vector(view: View, target, prior: Prior | None = None, induced: bool = False) -> FeatureVector:
    if prior is None:
        prior = compute_prior(view)
    return FeatureVector(tuple(single_motif_score(view, target, p, "GSMNB-CL", prior, induced).value
                               for p in CATALOG))


def score_matrix(evidence: Evidence, prior: Prior, variant: str = "GSMNB-CL") -> np.ndarray:
    """Per-target, per-predictor scores of shape ``(n_targets, 9)`` from batch evidence."""
    sums = evidence.log_sums(check_variant(variant))
    return evidence.n_entities * prior.log_a + sums


def method_features(evidence: Evidence, prior: Prior, method: str, predictor: PredictorId | None = None) -> np.ndarray:
    """Classifier input for one method: 1 column for single predictors and GMMNB, 9 for FGMNB."""
    if method == "FGMNB":
        return score_matrix(evidence, prior, "GSMNB-CL")
    if method == "GMMNB":
        return score_matrix(evidence, prior, "GSMNB-CL").sum(axis=1, keepdims=True)
    if predictor is None:
        raise ValueError(f"method {method} needs a predictor")
    return score_matrix(evidence, prior, method)[:, predictor.index:predictor.index + 1]


def write_scores_csv(stream: TextIO, rows: Iterable[tuple[str, str, str, str, float]]) -> None:
    """Rows of (u, v, predictor label or GMMNB / FGMNB-i, variant, value)."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["u", "v", "predictor", "variant", "value"])
    for u, v, label, variant, value in rows:
        w.writerow([u, v, label, variant, repr(float(value))])


__all__ = [
    "VARIANTS", "Prior", "DegeneratePrior", "LinkScore", "FeatureVector", "compute_prior",
    "smoothed_ratio", "log_ratio", "entity_evidence", "single_motif_score", "gmmnb_score", "feature_vector",
    "score_matrix", "method_features", "write_scores_csv",
]
