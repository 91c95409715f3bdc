"""Per-entity predictor counting on a (possibly masked) signed graph.

An *instance* of a predictor is a wedge ``X-M-Y`` or path ``P-C-D-Q`` whose
context links all carry known signs matching the predictor, together with the
closing *target-role* link ``(X, Y)`` / ``(P, Q)``. The instance's evidence is
the sign of that closing link, so only instances whose target-role link has a
known sign are counted. Matching is non-induced unless ``induced=True``, in
which case a 4-node instance may not carry either chord.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from ..graph import View
from .catalog import CATALOG, PredictorId, quad_index, triad_index


@dataclass(frozen=True)
class NeighborEntity:
    """A common neighbour node (triads) or a neighbouring link (quads)."""

    nodes: tuple[str, ...]

    @classmethod
    def node(cls, m: str) -> "NeighborEntity":
        return cls((str(m),))

    @classmethod
    def link(cls, c: str, d: str) -> "NeighborEntity":
        c, d = str(c), str(d)
        return cls((c, d) if c <= d else (d, c))

    @property
    def is_link(self) -> bool:
        return len(self.nodes) == 2

    def __str__(self) -> str:
        return "-".join(self.nodes)


@dataclass(frozen=True)
class EntityCounts:
    pos: int = 0
    neg: int = 0

    def __post_init__(self):
        if self.pos < 0 or self.neg < 0:
            raise ValueError("counts must be non-negative")

    def __add__(self, other: "EntityCounts") -> "EntityCounts":
        return EntityCounts(self.pos + other.pos, self.neg + other.neg)

    def __iter__(self):
        return iter((self.pos, self.neg))


@dataclass(frozen=True)
class PredictorInstance:
    predictor: PredictorId
    target_role_link: tuple[int, int]
    entity: tuple[int, ...]
    context_links: frozenset[int]
    target_sign: int


class EntityMismatch(ValueError):
    """The entity does not form the predictor with the given target."""


def _adjacency(view: View) -> list[dict[int, int]]:
    cached = getattr(view, "_local_adj", None)
    if cached is not None:
        return cached
    g = view.graph
    signs = view.signs
    adj: list[dict[int, int]] = [dict() for _ in range(g.n_nodes)]
    for k, (u, v) in enumerate(zip(g.src.tolist(), g.dst.tolist())):
        s = int(signs[k])
        adj[u][v] = s
        adj[v][u] = s
    view._local_adj = adj
    return adj


def _pair(view: View, target) -> tuple[int, int]:
    a, b = target
    g = view.graph
    return g.index(a), g.index(b)


def _entity_idx(view: View, entity: NeighborEntity, predictor: PredictorId) -> tuple[int, ...]:
    if entity.is_link == predictor.is_triad:
        raise EntityMismatch(f"entity {entity} does not fit predictor {predictor.label}")
    idx = tuple(view.graph.index(x) for x in entity.nodes)
    if entity.is_link and view.graph.link_id(*idx) < 0:
        raise EntityMismatch(f"entity link {entity} is not in the graph")
    return idx


def _quad_orientations(adj, a: int, b: int, c: int, d: int, p: int, induced: bool) -> list[tuple[int, int]]:
    """Connector pairs ``(a, c), (d, b)`` of every orientation a-c-d-b matching ``p``."""
    out = []
    for x, y in ((c, d), (d, c)):
        s1, s3 = adj[a].get(x), adj[y].get(b)
        s2 = adj[x].get(y)
        if not (s1 and s2 and s3):
            continue
        if induced and (y in adj[a] or x in adj[b]):
            continue
        if quad_index(s1, s2, s3) == p:
            out.append(((a, x), (y, b)))
    return out


def _entities_idx(view: View, a: int, b: int, predictor: PredictorId, induced: bool = False) -> set[tuple[int, ...]]:
    adj = _adjacency(view)
    p = predictor.index
    found: set[tuple[int, ...]] = set()
    if predictor.is_triad:
        for m, s_am in adj[a].items():
            s_bm = adj[b].get(m)
            if m != b and s_am and s_bm and triad_index(s_am, s_bm) == p:
                found.add((m,))
        return found
    for c, s_ac in adj[a].items():
        if c == b or not s_ac:
            continue
        for d, s_cd in adj[c].items():
            if d in (a, b) or not s_cd:
                continue
            s_db = adj[d].get(b)
            if not s_db or quad_index(s_ac, s_cd, s_db) != p:
                continue
            if induced and (d in adj[a] or c in adj[b]):
                continue
            found.add((c, d) if c < d else (d, c))
    return found


def _instances_idx(view: View, predictor: PredictorId, entity: tuple[int, ...],
                   induced: bool = False) -> Iterator[PredictorInstance]:
    g = view.graph
    adj = _adjacency(view)
    p = predictor.index
    if predictor.is_triad:
        (m,) = entity
        nbrs = sorted(adj[m])
        for x, y in combinations(nbrs, 2):
            if y not in adj[x]:
                continue
            sx, sy = adj[m][x], adj[m][y]
            if sx and sy and triad_index(sx, sy) == p:
                yield PredictorInstance(predictor, (x, y), entity,
                                        frozenset((g.link_id(x, m), g.link_id(y, m))), adj[x][y])
        return
    c, d = entity
    s_cd = adj[c][d]
    if not s_cd:
        return
    # every instance is a path P-c-d-Q with P hanging off c and Q off d
    for pp, s_pc in adj[c].items():
        if pp == d or not s_pc:
            continue
        for q, s_dq in adj[d].items():
            if q in (c, pp) or not s_dq or q not in adj[pp]:
                continue
            if quad_index(s_pc, s_cd, s_dq) != p:
                continue
            if induced and (d in adj[pp] or c in adj[q]):
                continue
            ctx = frozenset((g.link_id(pp, c), g.link_id(c, d), g.link_id(d, q)))
            yield PredictorInstance(predictor, (min(pp, q), max(pp, q)), entity, ctx, adj[pp][q])


def _target_context(view: View, a: int, b: int, predictor: PredictorId, entity: tuple[int, ...],
                    induced: bool) -> frozenset[int]:
    g = view.graph
    adj = _adjacency(view)
    if predictor.is_triad:
        (m,) = entity
        s_am, s_bm = adj[a].get(m), adj[b].get(m)
        if m in (a, b) or not (s_am and s_bm) or triad_index(s_am, s_bm) != predictor.index:
            raise EntityMismatch(f"node {g.labels[m]} does not form {predictor.label} with the target")
        return frozenset((g.link_id(a, m), g.link_id(b, m)))
    c, d = entity
    if {c, d} & {a, b}:
        raise EntityMismatch("entity link shares a node with the target")
    orients = _quad_orientations(adj, a, b, c, d, predictor.index, induced)
    if not orients:
        raise EntityMismatch(f"link {g.labels[c]}-{g.labels[d]} does not form {predictor.label} with the target")
    return frozenset(g.link_id(*pair) for o in orients for pair in o)


def _tally(instances, exclude: tuple[int, int] | None) -> EntityCounts:
    pos = neg = 0
    for inst in instances:
        if inst.target_sign == 0 or inst.target_role_link == exclude:
            continue
        if inst.target_sign > 0:
            pos += 1
        else:
            neg += 1
    return EntityCounts(pos, neg)


def _ordered(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def enumerate_entities(view: View, target, predictor: PredictorId, induced: bool = False) -> set[NeighborEntity]:
    """Entities forming ``predictor`` with the node pair ``target`` (which need not be linked)."""
    a, b = _pair(view, target)
    labels = view.graph.labels
    out = set()
    for e in _entities_idx(view, a, b, predictor, induced):
        out.add(NeighborEntity.node(labels[e[0]]) if len(e) == 1 else NeighborEntity.link(labels[e[0]], labels[e[1]]))
    return out


def predictor_instances(view: View, predictor: PredictorId, entity: NeighborEntity,
                        induced: bool = False) -> list[PredictorInstance]:
    return list(_instances_idx(view, predictor, _entity_idx(view, entity, predictor), induced))


def count_plain(view: View, predictor: PredictorId, entity: NeighborEntity, exclude=None,
                induced: bool = False) -> EntityCounts:
    """Signs of all target-role links of the entity's instances, minus ``exclude``."""
    ent = _entity_idx(view, entity, predictor)
    excl = None
    if exclude is not None:
        excl = _ordered(*_pair(view, exclude))
    return _tally(_instances_idx(view, predictor, ent, induced), excl)


def _split_counts(view: View, predictor, entity, target, induced, common: bool) -> EntityCounts:
    ent = _entity_idx(view, entity, predictor)
    a, b = _pair(view, target)
    ctx = _target_context(view, a, b, predictor, ent, induced)
    chosen = (i for i in _instances_idx(view, predictor, ent, induced)
              if bool(i.context_links & ctx) == common)
    return _tally(chosen, _ordered(a, b))


def count_cl(view: View, predictor: PredictorId, entity: NeighborEntity, target,
             induced: bool = False) -> EntityCounts:
    """Counts over instances sharing a context link with the target's own instance.

    For a quad entity the shared entity link does not qualify; only the
    connectors ``(A, C)`` and ``(D, B)`` of each matching orientation do.
    """
    return _split_counts(view, predictor, entity, target, induced, common=True)


def count_cn(view: View, predictor: PredictorId, entity: NeighborEntity, target,
             induced: bool = False) -> EntityCounts:
    """Counts over instances sharing only the entity with the target's own instance."""
    return _split_counts(view, predictor, entity, target, induced, common=False)


def link_covered(view: View, k: int, predictor: PredictorId, induced: bool = False) -> bool:
    g = view.graph
    return bool(_entities_idx(view, int(g.src[k]), int(g.dst[k]), predictor, induced))


def motif_coverage(graph: View, predictor: PredictorId, induced: bool = False) -> float:
    """Fraction of links sitting in the target role of at least one instance.

    The covered link's own sign is irrelevant; the instance's context signs
    must be known.
    """
    m = graph.graph.n_links
    if m == 0:
        raise ValueError("motif coverage is undefined on a graph without links")
    hits = sum(link_covered(graph, k, predictor, induced) for k in range(m))
    return hits / m


def coverage_table(graph: View, induced: bool = False) -> dict[str, float]:
    return {p.label: motif_coverage(graph, p, induced) for p in CATALOG}


__all__ = [
    "NeighborEntity", "EntityCounts", "PredictorInstance", "EntityMismatch",
    "enumerate_entities", "predictor_instances", "count_plain", "count_cl", "count_cn",
    "motif_coverage", "coverage_table", "link_covered",
]
