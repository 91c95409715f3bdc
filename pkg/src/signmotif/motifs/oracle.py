"""Exhaustive instance enumeration over all node triples and quadruples.

Used as a reference for the optimized counters. It deliberately avoids the
catalog's index tables: patterns are compared literally (sorted pair for
wedges, sequence or its reverse for paths).
"""

from __future__ import annotations

from itertools import combinations

from ..graph import View
from .catalog import PredictorId
from .counting import EntityCounts, NeighborEntity

MAX_LINKS = 2000

# the three distinct 4-cycles on vertices (0, 1, 2, 3)
_CYCLES = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3))


def _link_sign(view: View, x: int, y: int) -> int | None:
    """None when x-y is not a link, 0 when it is hidden, else its sign."""
    k = view.graph.link_id(x, y)
    if k < 0:
        return None
    return int(view.signs[k])


def _matches(predictor: PredictorId, signs: tuple[int, ...]) -> bool:
    if predictor.is_triad:
        return sorted(signs) == sorted(predictor.pattern)
    return signs == predictor.pattern or signs[::-1] == predictor.pattern


def _all_instances(view: View, induced: bool):
    """Every (kind, entity, target-role pair, context links, target sign, pattern signs), also grouped by entity."""
    cache = getattr(view, "_oracle_cache", {})
    if induced in cache:
        return cache[induced]
    g = view.graph
    n = g.n_nodes
    found = []
    for tri in combinations(range(n), 3):
        for apex in tri:
            x, y = [t for t in tri if t != apex]
            s_xy, s_xm, s_ym = _link_sign(view, x, y), _link_sign(view, x, apex), _link_sign(view, y, apex)
            if s_xy is None or not s_xm or not s_ym:
                continue
            found.append(("triad", (apex,), frozenset((x, y)),
                          frozenset((frozenset((x, apex)), frozenset((y, apex)))), s_xy, (s_xm, s_ym)))
    for quad in combinations(range(n), 4):
        for order in _CYCLES:
            cyc = [quad[i] for i in order]
            links = [(cyc[i], cyc[(i + 1) % 4]) for i in range(4)]
            signs = [_link_sign(view, *l) for l in links]
            if any(s is None for s in signs):
                continue
            if induced and (_link_sign(view, cyc[0], cyc[2]) is not None
                            or _link_sign(view, cyc[1], cyc[3]) is not None):
                continue
            for r in range(4):
                tgt = links[r]
                # path from the far end of the target back round to its near end
                path = [links[(r + 1) % 4], links[(r + 2) % 4], links[(r + 3) % 4]]
                path_signs = tuple(signs[(r + i) % 4] for i in (1, 2, 3))
                if not all(path_signs):
                    continue
                entity = tuple(sorted(path[1]))
                found.append(("quad", entity, frozenset(tgt),
                              frozenset(frozenset(l) for l in path), signs[r], path_signs))
    by_entity: dict = {}
    for inst in found:
        by_entity.setdefault((inst[0], inst[1]), []).append(inst)
    cache[induced] = (found, by_entity)
    view._oracle_cache = cache
    return found, by_entity


def _target_context(view: View, predictor: PredictorId, entity: tuple[int, ...], a: int, b: int,
                    induced: bool):
    """Union of context links (entity link excluded) over the target's own matching instances."""
    ctx = set()
    if predictor.is_triad:
        (m,) = entity
        s1, s2 = _link_sign(view, a, m), _link_sign(view, b, m)
        if s1 and s2 and _matches(predictor, (s1, s2)):
            ctx |= {frozenset((a, m)), frozenset((b, m))}
        return ctx
    c, d = entity
    for x, y in ((c, d), (d, c)):
        signs = (_link_sign(view, a, x), _link_sign(view, x, y), _link_sign(view, y, b))
        if not all(signs) or not _matches(predictor, signs):
            continue
        if induced and (_link_sign(view, a, y) is not None or _link_sign(view, x, b) is not None):
            continue
        ctx |= {frozenset((a, x)), frozenset((y, b))}
    return ctx


def brute_force_counts(view: View, predictor: PredictorId, entity: NeighborEntity, target,
                       mode: str = "plain", induced: bool = False) -> EntityCounts:
    """Reference counts by exhaustive enumeration.

    ``mode`` is ``plain`` (``target`` is only excluded), ``cl`` or ``cn``.
    Refuses graphs with more than ``MAX_LINKS`` links.
    """
    if mode not in ("plain", "cl", "cn"):
        raise ValueError(f"unknown mode {mode!r}")
    g = view.graph
    if g.n_links > MAX_LINKS:
        raise ValueError(f"graph too large for exhaustive enumeration ({g.n_links} > {MAX_LINKS} links)")
    ent = tuple(sorted(g.index(x) for x in entity.nodes))
    kind = "triad" if predictor.is_triad else "quad"
    exclude = None
    ctx = set()
    if target is not None:
        a, b = g.index(target[0]), g.index(target[1])
        exclude = frozenset((a, b))
        if mode != "plain":
            ctx = _target_context(view, predictor, ent, a, b, induced)
            if not ctx:
                raise ValueError("entity does not form the predictor with the target")
    pos = neg = 0
    _, by_entity = _all_instances(view, induced)
    for inst_kind, inst_ent, tgt, context, s_t, pat in by_entity.get((kind, ent), ()):
        if inst_kind != kind or inst_ent != ent or not s_t or tgt == exclude:
            continue
        if not _matches(predictor, pat):
            continue
        if mode == "cl" and not (context & ctx):
            continue
        if mode == "cn" and (context & ctx):
            continue
        if s_t > 0:
            pos += 1
        else:
            neg += 1
    return EntityCounts(pos, neg)


def brute_force_entities(view: View, target, predictor: PredictorId, induced: bool = False) -> set[NeighborEntity]:
    g = view.graph
    a, b = g.index(target[0]), g.index(target[1])
    out = set()
    if predictor.is_triad:
        for m in range(g.n_nodes):
            if m not in (a, b) and _target_context(view, predictor, (m,), a, b, induced):
                out.add(NeighborEntity.node(g.labels[m]))
    else:
        for k in range(g.n_links):
            c, d = int(g.src[k]), int(g.dst[k])
            if {c, d} & {a, b}:
                continue
            if _target_context(view, predictor, (c, d), a, b, induced):
                out.add(NeighborEntity.link(g.labels[c], g.labels[d]))
    return out


def brute_force_coverage(view: View, predictor: PredictorId, induced: bool = False) -> float:
    g = view.graph
    if g.n_links == 0:
        raise ValueError("motif coverage is undefined on a graph without links")
    if g.n_links > MAX_LINKS:
        raise ValueError(f"graph too large for exhaustive enumeration ({g.n_links} > {MAX_LINKS} links)")
    kind = "triad" if predictor.is_triad else "quad"
    covered = {tgt for k, _, tgt, _, _, pat in _all_instances(view, induced)[0]
               if k == kind and _matches(predictor, pat)}
    return len(covered) / g.n_links
