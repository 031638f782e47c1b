"""Edge support (triangle counts) and the bin-sorted peeling array."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import Edge, EdgeNotFound, Graph

Triangle = tuple[int, int, int]


@dataclass
class ProbeStats:
    """Counts adjacency entries examined while looking for triangles."""

    probes: int = 0
    removals: int = 0


def _ordered(g: Graph, u: int, v: int) -> tuple[int, int]:
    # iterate from the endpoint with the shorter list; ties by id
    du, dv = g.degree(u), g.degree(v)
    return (u, v) if (du, u) <= (dv, v) else (v, u)


def compute_support(g: Graph) -> dict[Edge, int]:
    """Exact triangle count of every edge, keyed by canonical edge."""
    nbsets = {v: set(g.neighbors(v)) for v in g.vertices()}
    sup = {}
    for e in g.edges():
        a, b = _ordered(g, *e)
        other = nbsets[b]
        sup[e] = sum(1 for w in g.neighbors(a) if w in other)
    return sup


def support_of(g: Graph, edges: Iterable[Edge], dead: set[Edge] | frozenset = frozenset()) -> dict[Edge, int]:
    """Support of selected edges, ignoring triangles that use a dead edge."""
    has = g.edge_set
    sup = {}
    for e in edges:
        a, b = _ordered(g, *e)
        count = 0
        for w in g.neighbors(a):
            if w == b:
                continue
            e1 = (a, w) if a < w else (w, a)
            e2 = (b, w) if b < w else (w, b)
            if e2 in has and e1 not in dead and e2 not in dead:
                count += 1
        sup[e] = count
    return sup


def enumerate_triangles_of_edge(g: Graph, e: Edge) -> Iterator[Triangle]:
    u, v = e
    if not g.has_edge(u, v):
        raise EdgeNotFound(e)
    a, b = _ordered(g, u, v)
    has = g.edge_set
    for w in g.neighbors(a):
        if w != b and ((b, w) if b < w else (w, b)) in has:
            yield tuple(sorted((u, v, w)))


def triangles(g: Graph) -> Iterator[Triangle]:
    """Every triangle once, as an ascending triple."""
    for u in g.vertices():
        nbrs = g.neighbors(u)
        higher = [w for w in nbrs if w > u]
        for i, v in enumerate(higher):
            vn = g.neighbors(v)
            vset = set(vn)
            for w in higher[i + 1:]:
                if w in vset:
                    yield (u, v, w)


def dump_support(sup: dict[Edge, int]) -> str:
    return "".join(f"{u} {v} {s}\n" for (u, v), s in sorted(sup.items()))


class PeelOrder:
    """Edges bin-sorted by current support, with O(1) decrement.

    ``edges[:head]`` have been popped; the suffix is kept non-decreasing in
    support. ``bin_start[s]`` clamped to ``head`` is the first unpopped index
    whose support is at least ``s``.
    """

    def __init__(self, support: dict[Edge, int]):
        self.support = dict(support)
        top = max(self.support.values(), default=0)
        counts = [0] * (top + 2)
        for s in self.support.values():
            counts[s] += 1
        self.bin_start = [0] * (top + 2)
        start = 0
        for s in range(top + 1):
            self.bin_start[s] = start
            start += counts[s]
        self.bin_start[top + 1] = start
        fill = list(self.bin_start)
        self.edges: list[Edge] = [None] * len(self.support)  # type: ignore[list-item]
        for e in sorted(self.support):
            s = self.support[e]
            self.edges[fill[s]] = e
            fill[s] += 1
        self.pos = {e: i for i, e in enumerate(self.edges)}
        self.head = 0

    def __len__(self) -> int:
        return len(self.edges) - self.head

    def peek(self) -> Edge | None:
        return self.edges[self.head] if self.head < len(self.edges) else None

    def pop(self) -> Edge:
        e = self.edges[self.head]
        self.head += 1
        return e

    def popped(self, e: Edge) -> bool:
        return self.pos[e] < self.head

    def decrement(self, e: Edge) -> None:
        s = self.support[e]
        if s <= 0:
            raise RuntimeError(f"support of {e} would drop below zero")
        i = self.pos[e]
        if i < self.head:
            raise RuntimeError(f"{e} was already peeled")
        j = max(self.bin_start[s], self.head)
        f = self.edges[j]
        self.edges[i], self.edges[j] = f, e
        self.pos[f], self.pos[e] = i, j
        self.bin_start[s] = j + 1
        self.support[e] = s - 1

    def audit(self) -> None:
        assert all(self.edges[i] is not None for i in range(len(self.edges)))
        assert all(self.pos[e] == i for i, e in enumerate(self.edges))
        assert len(self.pos) == len(self.edges)
        tail = [self.support[e] for e in self.edges[self.head:]]
        assert all(a <= b for a, b in zip(tail, tail[1:])), "unpopped suffix not sorted"
        for s in range(len(self.bin_start)):
            j = max(self.bin_start[s], self.head)
            first = next((i for i in range(self.head, len(self.edges)) if self.support[self.edges[i]] >= s), len(self.edges))
            assert j == first, f"bin {s} starts at {j}, expected {first}"


def peel(
    g: Graph,
    candidates: Iterable[Edge],
    limit: int,
    dead: set[Edge] | None = None,
    stats: ProbeStats | None = None,
) -> list[Edge]:
    """Repeatedly remove the candidate edge of lowest support while it is <= limit.

    Supports are counted in ``g`` minus ``dead``; non-candidate edges stay
    put and only contribute triangles. Removed edges are added to ``dead``
    and returned in removal order.
    """
    dead = set() if dead is None else dead
    cands = [e for e in candidates if e not in dead]
    order = PeelOrder(support_of(g, cands, dead))
    has = g.edge_set
    removed = []
    while order.peek() is not None and order.support[order.peek()] <= limit:
        e = order.pop()
        a, b = _ordered(g, *e)
        for w in g.neighbors(a):
            if stats is not None:
                stats.probes += 1
            if w == b:
                continue
            e1 = (a, w) if a < w else (w, a)
            e2 = (b, w) if b < w else (w, b)
            if e1 in dead or e2 not in has or e2 in dead:
                continue
            for f in (e1, e2):
                if f in order.pos and not order.popped(f) and order.support[f] > limit:
                    order.decrement(f)
        dead.add(e)
        removed.append(e)
    return removed
