"""Batch predictor evidence for many target pairs on one view."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..graph import View
from . import _kernels
from .catalog import CATALOG, N_PREDICTORS
from .counting import EntityCounts, NeighborEntity


@dataclass
class Evidence:
    """Per-target, per-predictor entity counts and log-ratio sums.

    Each array has shape ``(n_targets, 9)``. ``log_plain[t, i]`` is the sum over
    the entities of predictor ``i`` of ln((pos+1)/(neg+1)) on plain counts;
    ``log_cl`` and ``log_cn`` are the same on the common-link / common-node
    split.
    """

    n_entities: np.ndarray
    log_plain: np.ndarray
    log_cl: np.ndarray
    log_cn: np.ndarray

    def log_sums(self, variant: str) -> np.ndarray:
        return {"SMNB": self.log_plain, "GSMNB-CL": self.log_cl, "GSMNB-CN": self.log_cn}[variant]

    def __len__(self) -> int:
        return self.n_entities.shape[0]


class MotifIndex:
    """Compiled counting over a fixed view.

    Building the index lists every triangle and 4-cycle once to get
    per-entity totals; per-target evidence then only scans the target's
    two-hop neighbourhood.
    """

    def __init__(self, view: View, induced: bool = False):
        self.view = view
        self.graph = view.graph
        self.induced = bool(induced)
        g = self.graph
        self._csr = (np.ascontiguousarray(g.indptr), np.ascontiguousarray(g.indices),
                     np.ascontiguousarray(g.link_ids))
        self._signs = np.ascontiguousarray(view.signs, dtype=np.int8)

    @cached_property
    def _totals(self):
        return _kernels.view_totals(*self._csr, self._signs, self.induced)

    @property
    def cycle_count(self) -> int:
        """Number of 4-cycles (as node sets with cyclic order) in the topology."""
        return int(self._totals[3])

    def _pairs(self, targets) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(targets, dtype=np.int64).reshape(-1, 2)
        return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])

    def evidence(self, targets) -> Evidence:
        """Evidence for node-index pairs ``targets`` (array-like of shape (t, 2))."""
        tri_tot, quad_tot, _, _ = self._totals
        ta, tb = self._pairs(targets)
        n_ent, s_plain, s_cl, s_cn = _kernels.batch_evidence(
            ta, tb, *self._csr, self._signs, tri_tot, quad_tot, self.induced)
        return Evidence(n_ent, s_plain, s_cl, s_cn)

    def link_evidence(self, link_ids) -> Evidence:
        g = self.graph
        ids = np.asarray(link_ids, dtype=np.int64)
        return self.evidence(np.stack([g.src[ids], g.dst[ids]], axis=1))

    def entity_counts(self, target) -> dict[tuple[str, NeighborEntity], tuple[EntityCounts, EntityCounts]]:
        """``{(predictor label, entity): (plain, common-link)}`` for one labelled pair.

        Plain counts exclude the target link itself.
        """
        g = self.graph
        a, b = g.index(target[0]), g.index(target[1])
        tri_tot, quad_tot, _, _ = self._totals
        rec = _kernels.target_records(a, b, *self._csr, self._signs, tri_tot, quad_tot, self.induced)
        out = {}
        for p, e0, e1, pp, pn, cp, cn in rec.tolist():
            if e1 < 0:
                ent = NeighborEntity.node(g.labels[e0])
            else:
                ent = NeighborEntity.link(g.labels[e0], g.labels[e1])
            out[(CATALOG[p].label, ent)] = (EntityCounts(pp, pn), EntityCounts(cp, cn))
        return out

    def coverage(self) -> np.ndarray:
        """Per-predictor fraction of links covered, in catalog order."""
        m = self.graph.n_links
        if m == 0:
            raise ValueError("motif coverage is undefined on a graph without links")
        covered = self._totals[2]
        return covered.sum(axis=0) / m


__all__ = ["MotifIndex", "Evidence", "N_PREDICTORS"]
