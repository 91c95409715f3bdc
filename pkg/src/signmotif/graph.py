"""Undirected signed graphs and sign-masked views over them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np


def node_sort_key(label: str) -> tuple:
    # numeric ids sort numerically, everything else lexicographically after them
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


class SignedGraph:
    """Immutable undirected simple graph with a +1/-1 sign on every link.

    Nodes are opaque string labels mapped to dense indices ``0..n-1`` in
    :func:`node_sort_key` order. Links are stored with ``src < dst`` (by index)
    and carry an integer id. Adjacency is kept in CSR form with each row sorted
    by neighbour index, so membership queries are a binary search or a dict hit.
    """

    def __init__(self, labels: list[str], src: np.ndarray, dst: np.ndarray, sign: np.ndarray):
        self.labels = list(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("duplicate node labels")
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        sign = np.asarray(sign, dtype=np.int8)
        if not (len(src) == len(dst) == len(sign)):
            raise ValueError("link arrays differ in length")
        if np.any(src == dst):
            raise ValueError("self-loops are not allowed")
        if len(sign) and not np.all(np.abs(sign) == 1):
            raise ValueError("signs must be +1 or -1")
        n = len(self.labels)
        if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("link endpoint outside node range")
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        order = np.lexsort((hi, lo))
        lo, hi, sign = lo[order], hi[order], sign[order]
        if len(lo) > 1 and np.any((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])):
            raise ValueError("repeated links are not allowed")
        self.src, self.dst, self.sign = lo, hi, sign
        for arr in (self.src, self.dst, self.sign):
            arr.setflags(write=False)
        self._build_csr()

    def _build_csr(self) -> None:
        n, m = self.n_nodes, self.n_links
        ends = np.concatenate([self.src, self.dst])
        other = np.concatenate([self.dst, self.src])
        ids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((other, ends))
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(ends, minlength=n), out=self.indptr[1:])
        self.indices = other[order].astype(np.int64)
        self.link_ids = ids[order].astype(np.int64)
        for arr in (self.indptr, self.indices, self.link_ids):
            arr.setflags(write=False)

    @classmethod
    def from_links(cls, links: Iterable[tuple[str, str, int]], nodes: Iterable[str] = ()) -> "SignedGraph":
        """Build a graph from ``(u, v, sign)`` triples with string node labels."""
        links = [(str(u), str(v), int(s)) for u, v, s in links]
        labels = set(map(str, nodes))
        for u, v, _ in links:
            labels.update((u, v))
        labels = sorted(labels, key=node_sort_key)
        index = {label: i for i, label in enumerate(labels)}
        src = np.array([index[u] for u, _, _ in links], dtype=np.int64)
        dst = np.array([index[v] for _, v, _ in links], dtype=np.int64)
        sign = np.array([s for _, _, s in links], dtype=np.int8)
        return cls(labels, src, dst, sign)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_links(self) -> int:
        return len(self.src)

    @property
    def graph(self) -> "SignedGraph":
        return self

    @property
    def signs(self) -> np.ndarray:
        """Per-link sign as seen by counting code; never 0 on a bare graph."""
        return self.sign

    @property
    def hidden(self) -> frozenset[int]:
        return frozenset()

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node {label!r}") from None

    def has_node(self, label: str) -> bool:
        return str(label) in self._index

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    @cached_property
    def _pair_to_link(self) -> dict[tuple[int, int], int]:
        return {(int(u), int(v)): k for k, (u, v) in enumerate(zip(self.src, self.dst))}

    def link_id(self, i: int, j: int) -> int:
        """Link id for node indices ``i, j`` in either order, or -1 if absent."""
        if i > j:
            i, j = j, i
        return self._pair_to_link.get((i, j), -1)

    def link_id_of(self, u: str, v: str) -> int:
        """Link id for node labels; raises KeyError if the link is absent."""
        k = self.link_id(self.index(u), self.index(v))
        if k < 0:
            raise KeyError(f"no link ({u}, {v})")
        return k

    def has_link(self, u: str, v: str) -> bool:
        if not (self.has_node(u) and self.has_node(v)):
            return False
        return self.link_id(self.index(u), self.index(v)) >= 0

    def endpoints(self, k: int) -> tuple[str, str]:
        return self.labels[self.src[k]], self.labels[self.dst[k]]

    def iter_links(self) -> Iterator[tuple[str, str, int]]:
        for u, v, s in zip(self.src, self.dst, self.sign):
            yield self.labels[u], self.labels[v], int(s)

    def canonical_links(self) -> list[tuple[str, str, int]]:
        """Links with endpoints in lexicographic label order, sorted."""
        out = []
        for u, v, s in self.iter_links():
            if v < u:
                u, v = v, u
            out.append((u, v, s))
        out.sort()
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (sorted(self.labels) == sorted(other.labels)
                and self.canonical_links() == other.canonical_links())

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.n_links))

    def __repr__(self) -> str:
        return f"SignedGraph(nodes={self.n_nodes}, links={self.n_links})"


class SignedView:
    """A graph whose hidden links report an unknown sign.

    Topology is untouched: hidden links stay present for adjacency queries and
    motif matching, only their sign reads as 0 in :attr:`signs`.
    """

    def __init__(self, graph: SignedGraph, hidden: Iterable[int] = ()):
        self.graph = graph
        hidden = np.unique(np.asarray(list(hidden), dtype=np.int64))
        if len(hidden) and (hidden[0] < 0 or hidden[-1] >= graph.n_links):
            raise ValueError("hidden link id outside graph")
        self.hidden = frozenset(int(k) for k in hidden)
        signs = graph.sign.copy()
        signs[hidden] = 0
        signs.setflags(write=False)
        self.signs = signs

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def n_links(self) -> int:
        return self.graph.n_links

    def sign_of(self, u: str, v: str) -> int | None:
        """+1/-1 for a link with a known sign, None if hidden; KeyError if absent."""
        s = int(self.signs[self.graph.link_id_of(u, v)])
        return s if s else None

    def __repr__(self) -> str:
        return f"SignedView({self.graph!r}, hidden={len(self.hidden)})"


View = SignedGraph | SignedView


def mask(graph: SignedGraph, hidden: Iterable) -> SignedView:
    """Hide the signs of ``hidden`` links.

    ``hidden`` holds link ids or ``(u, v)`` label pairs; every entry must name
    an existing link.
    """
    ids = []
    for item in hidden:
        if isinstance(item, (int, np.integer)):
            if not 0 <= item < graph.n_links:
                raise KeyError(f"no link with id {item}")
            ids.append(int(item))
        else:
            u, v = item
            ids.append(graph.link_id_of(u, v))
    return SignedView(graph, ids)


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    link_count: int
    f_plus: float | None
    f_minus: float | None

    def as_dict(self) -> dict:
        return {"node_count": self.node_count, "link_count": self.link_count,
                "f_plus": self.f_plus, "f_minus": self.f_minus}


def stats(graph: SignedGraph) -> GraphStats:
    """Node/link counts and sign fractions; fractions are None for a linkless graph."""
    m = graph.n_links
    if m == 0:
        return GraphStats(graph.n_nodes, 0, None, None)
    pos = int(np.count_nonzero(graph.sign > 0))
    return GraphStats(graph.n_nodes, m, pos / m, (m - pos) / m)
