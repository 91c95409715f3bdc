"""Seeded train/test realizations: negatives split by fraction, positives matched in size."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..graph import SignedGraph


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.9
    realizations: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie strictly between 0 and 1, got {self.train_fraction}")
        if self.realizations < 1:
            raise ValueError("realizations must be positive")


@dataclass(frozen=True)
class Realization:
    """Link ids (sorted) of the four sets of one realization."""

    index: int
    seed: tuple[int, int]
    train_pos: np.ndarray
    train_neg: np.ndarray
    test_pos: np.ndarray
    test_neg: np.ndarray

    @property
    def hidden(self) -> np.ndarray:
        return np.sort(np.concatenate([self.test_pos, self.test_neg]))

    @staticmethod
    def _stack(pos: np.ndarray, neg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ids = np.concatenate([pos, neg])
        labels = np.concatenate([np.ones(pos.size, dtype=np.int64), -np.ones(neg.size, dtype=np.int64)])
        return ids, labels

    def train_set(self) -> tuple[np.ndarray, np.ndarray]:
        return self._stack(self.train_pos, self.train_neg)

    def test_set(self) -> tuple[np.ndarray, np.ndarray]:
        return self._stack(self.test_pos, self.test_neg)


def split_sizes(n_neg: int, train_fraction: float) -> tuple[int, int]:
    # rounding guard so 0.9 * 1186 style products are not pushed below an integer by float error
    n_train = math.floor(round(train_fraction * n_neg, 9))
    return n_train, n_neg - n_train


def make_realization(graph: SignedGraph, spec: SplitSpec, index: int) -> Realization:
    """Realization ``index`` of ``spec``; a pure function of (graph, spec, index)."""
    neg = np.flatnonzero(graph.signs < 0)
    pos = np.flatnonzero(graph.signs > 0)
    n_train, n_test = split_sizes(neg.size, spec.train_fraction)
    if n_train == 0 or n_test == 0:
        raise ValueError(f"{neg.size} negative links cannot be split into non-empty train and test sets")
    if pos.size < neg.size:
        raise ValueError(f"need {neg.size} positive links for balanced sampling, graph has {pos.size}")
    seed = (int(spec.master_seed), int(index))
    rng = np.random.default_rng(list(seed))
    neg_perm = rng.permutation(neg)
    pos_pick = rng.choice(pos, size=neg.size, replace=False)
    return Realization(
        index=int(index),
        seed=seed,
        train_pos=np.sort(pos_pick[:n_train]),
        train_neg=np.sort(neg_perm[:n_train]),
        test_pos=np.sort(pos_pick[n_train:]),
        test_neg=np.sort(neg_perm[n_train:]),
    )
