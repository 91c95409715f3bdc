"""AUC and accuracy for balanced sign-prediction test sets."""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import rankdata


def auc(pos_scores, neg_scores) -> float:
    """Exact AUC over all positive/negative pairs; tied pairs count one half."""
    pos = np.asarray(pos_scores, dtype=float).ravel()
    neg = np.asarray(neg_scores, dtype=float).ravel()
    if pos.size == 0 or neg.size == 0:
        raise ValueError("AUC needs at least one positive and one negative score")
    ranks = rankdata(np.concatenate([pos, neg]))
    # average ranks are multiples of 0.5, so this sum is exact
    u = ranks[: pos.size].sum() - pos.size * (pos.size + 1) / 2.0
    return float(u / (pos.size * neg.size))


def sampled_auc(pos_scores, neg_scores, n_samples: int, rng: np.random.Generator) -> float:
    """Monte Carlo AUC from ``n_samples`` random positive/negative comparisons."""
    pos = np.asarray(pos_scores, dtype=float).ravel()
    neg = np.asarray(neg_scores, dtype=float).ravel()
    if pos.size == 0 or neg.size == 0:
        raise ValueError("AUC needs at least one positive and one negative score")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    p = pos[rng.integers(0, pos.size, n_samples)]
    q = neg[rng.integers(0, neg.size, n_samples)]
    higher = np.count_nonzero(p > q)
    ties = np.count_nonzero(p == q)
    return (higher + 0.5 * ties) / n_samples


def accuracy(predictions, labels) -> float:
    pred = np.asarray(predictions).ravel()
    lab = np.asarray(labels).ravel()
    if pred.size == 0:
        raise ValueError("accuracy of an empty prediction set is undefined")
    if pred.size != lab.size:
        raise ValueError(f"{pred.size} predictions for {lab.size} labels")
    return float(np.count_nonzero(pred == lab) / pred.size)


def mean_std(values) -> tuple[float, float]:
    """Mean and population standard deviation, summed exactly."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("no values")
    m = math.fsum(vals) / len(vals)
    var = math.fsum((v - m) ** 2 for v in vals) / len(vals)
    return m, math.sqrt(var)
