"""Second-order gradient boosting of depth-limited regression trees, logistic loss.

Splits are found by exact greedy search over every threshold between distinct
feature values; a row goes left when ``x <= threshold``. Leaf weights are the
Newton step ``-G / (H + l2_reg)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Protocol

import numpy as np


@dataclass(frozen=True)
class TrainConfig:
    rounds: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    min_child_weight: float = 1.0
    l2_reg: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1 or self.max_depth < 1:
            raise ValueError("rounds and max_depth must be positive")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must lie in (0, 1]")
        if self.min_child_weight < 0 or self.l2_reg < 0:
            raise ValueError("min_child_weight and l2_reg must be non-negative")


@dataclass
class Tree:
    """Flat array tree; ``feature[k] < 0`` marks a leaf holding ``value[k]``."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def _add(self) -> int:
        for arr, v in ((self.feature, -1), (self.threshold, 0.0), (self.left, -1),
                       (self.right, -1), (self.value, 0.0)):
            arr.append(v)
        return len(self.feature) - 1

    def depth(self, k: int = 0) -> int:
        if self.feature[k] < 0:
            return 0
        return 1 + max(self.depth(self.left[k]), self.depth(self.right[k]))

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.arange(X.shape[0])
        feat = np.array(self.feature)
        thr = np.array(self.threshold)
        left = np.array(self.left)
        right = np.array(self.right)
        val = np.array(self.value)
        while active.size:
            k = node[active]
            leaf = feat[k] < 0
            done = active[leaf]
            out[done] = val[node[done]]
            active = active[~leaf]
            k = node[active]
            go_left = X[active, feat[k]] <= thr[k]
            node[active] = np.where(go_left, left[k], right[k])
        return out


@dataclass
class BoostedModel:
    base_score: float
    learning_rate: float
    n_features: int
    trees: list[Tree] = field(default_factory=list)

    def margin(self, X) -> np.ndarray:
        X = _as_matrix(X)
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        m = np.full(X.shape[0], self.base_score)
        for t in self.trees:
            m += self.learning_rate * t.predict(X)
        return m

    def predict_proba(self, X) -> np.ndarray:
        return _sigmoid(self.margin(X))

    def predict(self, X) -> np.ndarray:
        return np.where(self.predict_proba(X) >= 0.5, 1, -1)

    def to_dict(self) -> dict:
        return {"base_score": self.base_score, "learning_rate": self.learning_rate,
                "n_features": self.n_features, "trees": [asdict(t) for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoostedModel":
        return cls(float(d["base_score"]), float(d["learning_rate"]), int(d["n_features"]),
                   [Tree(**t) for t in d["trees"]])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "BoostedModel":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        """Human-readable dump: one line per node, indented by depth."""
        lines = [f"base_score={self.base_score!r} learning_rate={self.learning_rate!r} n_features={self.n_features}"]
        for i, t in enumerate(self.trees):
            lines.append(f"tree {i}")

            def walk(k, depth):
                pad = "  " * (depth + 1)
                if t.feature[k] < 0:
                    lines.append(f"{pad}leaf value={t.value[k]!r}")
                    return
                lines.append(f"{pad}x[{t.feature[k]}] <= {t.threshold[k]!r}")
                walk(t.left[k], depth + 1)
                walk(t.right[k], depth + 1)

            walk(0, 0)
        return "\n".join(lines) + "\n"


def _sigmoid(m: np.ndarray) -> np.ndarray:
    # clipped so probabilities stay strictly inside (0, 1)
    return 1.0 / (1.0 + np.exp(-np.clip(m, -30.0, 30.0)))


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return X


def _labels01(y) -> np.ndarray:
    y = np.asarray(y)
    if not np.all((y == 1) | (y == -1)):
        raise ValueError("labels must be +1 or -1")
    return (y > 0).astype(float)


def logistic_loss(model: BoostedModel, X, y) -> float:
    t = _labels01(y)
    m = model.margin(X)
    return float(np.mean(np.logaddexp(0.0, m) - t * m))


def _canonical_sum(v: np.ndarray) -> float:
    # summing in sorted order makes the total independent of row order
    return float(np.sort(v).sum())


def _best_split(X, g, h, orders, member, G, H, cfg: TrainConfig):
    """(gain, feature, threshold) of the best split of the rows flagged in ``member``, or None."""
    lam = cfg.l2_reg
    parent = G * G / (H + lam)
    best = None
    for f in range(X.shape[1]):
        order = orders[f][member[orders[f]]]
        xs = X[order, f]
        gl = np.cumsum(g[order])[:-1]
        hl = np.cumsum(h[order])[:-1]
        # only cut between distinct values
        ok = xs[1:] > xs[:-1]
        ok &= (hl >= cfg.min_child_weight) & (H - hl >= cfg.min_child_weight)
        if not ok.any():
            continue
        gr, hr = G - gl, H - hl
        gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
        gain = np.where(ok, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > 1e-12 and (best is None or gain[i] > best[0]):
            best = (float(gain[i]), f, float((xs[i] + xs[i + 1]) / 2.0))
    return best


def _grow(X, g, h, orders, cfg: TrainConfig) -> Tree:
    tree = Tree()
    n = X.shape[0]
    stack = [(tree._add(), np.arange(n), 0)]
    while stack:
        k, rows, depth = stack.pop()
        G = _canonical_sum(g[rows])
        H = _canonical_sum(h[rows])
        split = None
        if depth < cfg.max_depth and rows.size > 1:
            member = np.zeros(n, dtype=bool)
            member[rows] = True
            split = _best_split(X, g, h, orders, member, G, H, cfg)
        if split is None:
            tree.value[k] = -G / (H + cfg.l2_reg)
            continue
        _, f, thr = split
        go_left = X[rows, f] <= thr
        tree.feature[k] = f
        tree.threshold[k] = thr
        tree.left[k] = tree._add()
        tree.right[k] = tree._add()
        stack.append((tree.right[k], rows[~go_left], depth + 1))
        stack.append((tree.left[k], rows[go_left], depth + 1))
    return tree


def train(X, y, config: TrainConfig | None = None, on_round: Callable[[BoostedModel], None] | None = None) -> BoostedModel:
    """Fit a boosted model to features ``X`` (n, d) and labels ``y`` in {+1, -1}."""
    cfg = config or TrainConfig()
    X = _as_matrix(X)
    t = _labels01(y)
    if X.shape[0] == 0:
        raise ValueError("cannot train on an empty dataset")
    if X.shape[0] != t.shape[0]:
        raise ValueError("feature and label counts differ")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    n_pos = int(t.sum())
    if n_pos == 0 or n_pos == t.size:
        raise ValueError("training data must contain both classes")
    p0 = n_pos / t.size
    model = BoostedModel(math.log(p0 / (1 - p0)), cfg.learning_rate, X.shape[1])
    margin = np.full(t.size, model.base_score)
    orders = [np.argsort(X[:, f], kind="stable") for f in range(X.shape[1])]
    for _ in range(cfg.rounds):
        p = _sigmoid(margin)
        g = p - t
        h = p * (1 - p)
        tree = _grow(X, g, h, orders, cfg)
        model.trees.append(tree)
        margin += cfg.learning_rate * tree.predict(X)
        if on_round is not None:
            on_round(model)
    return model


def predict_proba(model: BoostedModel, features) -> np.ndarray:
    return model.predict_proba(features)


class Classifier(Protocol):
    def fit(self, X, y) -> "Classifier": ...

    def predict_proba(self, X) -> np.ndarray: ...


class BoostedTreeClassifier:
    """Adapter exposing :func:`train` through a fit / predict_proba interface."""

    def __init__(self, config: TrainConfig | None = None):
        self.config = config or TrainConfig()
        self.model: BoostedModel | None = None

    def fit(self, X, y) -> "BoostedTreeClassifier":
        self.model = train(X, y, self.config)
        return self

    def predict_proba(self, X) -> np.ndarray:
        if self.model is None:
            raise RuntimeError("classifier is not fitted")
        return self.model.predict_proba(X)


_REGISTRY: dict[str, Callable[[TrainConfig], Classifier]] = {"internal": BoostedTreeClassifier}


def register_classifier(name: str, factory: Callable[[TrainConfig], Classifier]) -> None:
    """Make an alternative booster selectable by name, e.g. for cross-checks."""
    _REGISTRY[name] = factory


def make_classifier(name: str = "internal", config: TrainConfig | None = None) -> Classifier:
    if name not in _REGISTRY:
        raise KeyError(f"unknown classifier {name!r}; valid: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[name](config or TrainConfig())


__all__ = [
    "TrainConfig", "Tree", "BoostedModel", "train", "predict_proba", "logistic_loss",
    "Classifier", "BoostedTreeClassifier", "register_classifier", "make_classifier",
]
