"""In-memory truss decomposition: the classic queue-based peel and the
lower-degree-endpoint peel over a bin-sorted edge array."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Edge, Graph, ParseError
from .support import PeelOrder, ProbeStats, compute_support


@dataclass
class TrussLabeling:
    phi: dict[Edge, int] = field(default_factory=dict)

    @property
    def k_max(self) -> int:
        # 0 for an edgeless graph by convention
        return max(self.phi.values(), default=0)

    def classes(self) -> dict[int, set[Edge]]:
        out: dict[int, set[Edge]] = {}
        for e, k in self.phi.items():
            out.setdefault(k, set()).add(e)
        return dict(sorted(out.items()))

    def truss_edges(self, k: int) -> set[Edge]:
        return {e for e, j in self.phi.items() if j >= k}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TrussLabeling) and self.phi == other.phi

    def dumps(self) -> str:
        lines = [f"# k_max={self.k_max}\n"]
        lines.extend(f"{u} {v} {k}\n" for (u, v), k in sorted(self.phi.items()))
        return "".join(lines)


def classes(labeling: TrussLabeling) -> dict[int, set[Edge]]:
    return labeling.classes()


def truss_subgraph(g: Graph, labeling: TrussLabeling, k: int) -> Graph:
    if k < 2:
        raise ValueError("k must be >= 2")
    return Graph.from_edges(sorted(labeling.truss_edges(k)))


def load_labeling(source: str | Iterable[str]) -> TrussLabeling:
    lines = source.splitlines() if isinstance(source, str) else source
    phi = {}
    declared = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("k_max="):
                try:
                    declared = int(body[len("k_max="):])
                except ValueError:
                    raise ParseError(f"bad header {line!r}", lineno) from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v phi', got {line!r}", lineno)
        try:
            u, v, k = map(int, parts)
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        if u == v or k < 2:
            raise ParseError(f"invalid labeled edge {line!r}", lineno)
        e = (u, v) if u < v else (v, u)
        if e in phi:
            raise ParseError(f"edge {e} labeled twice", lineno)
        phi[e] = k
    labeling = TrussLabeling(phi)
    if declared is not None and declared != labeling.k_max:
        raise ParseError(f"header k_max={declared} disagrees with labels ({labeling.k_max})")
    return labeling


def decompose_improved(g: Graph, stats: ProbeStats | None = None) -> TrussLabeling:
    """Truss numbers of all edges in O(m^1.5) time.

    Always peels a current minimum-support edge; its triangles are found by
    walking the adjacency list of the lower-degree endpoint and probing the
    edge hash for the closing edge.
    """
    order = PeelOrder(compute_support(g))
    has = g.edge_set
    dead: set[Edge] = set()
    phi: dict[Edge, int] = {}
    k = 2
    while order.peek() is not None:
        e = order.pop()
        s = order.support[e]
        if s > k - 2:
            k = s + 2
        phi[e] = k
        u, v = e
        a, b = (u, v) if (g.degree(u), u) <= (g.degree(v), v) else (v, u)
        for w in g.neighbors(a):
            if stats is not None:
                stats.probes += 1
            if w == b:
                continue
            e1 = (a, w) if a < w else (w, a)
            if e1 in dead:
                continue
            e2 = (b, w) if b < w else (w, b)
            if e2 not in has or e2 in dead:
                continue
            # edges already at the current level are peeled at k regardless
            if order.support[e1] > k - 2:
                order.decrement(e1)
            if order.support[e2] > k - 2:
                order.decrement(e2)
        dead.add(e)
        if stats is not None:
            stats.removals += 1
    return TrussLabeling(phi)


def _common_alive(nu: tuple[int, ...], nv: tuple[int, ...], u: int, v: int, dead: set[Edge]) -> list[int]:
    out = []
    i = j = 0
    while i < len(nu) and j < len(nv):
        a, b = nu[i], nv[j]
        if a == b:
            if (min(u, a), max(u, a)) not in dead and (min(v, a), max(v, a)) not in dead:
                out.append(a)
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return out


def decompose_baseline(g: Graph, stats: ProbeStats | None = None) -> TrussLabeling:
    """Queue-driven peel, k = 3, 4, ...; each removal intersects both
    endpoint lists, costing deg(u) + deg(v)."""
    sup = compute_support(g)
    alive = set(sup)
    dead: set[Edge] = set()
    phi: dict[Edge, int] = {}
    k = 3
    while alive:
        queue = deque(sorted(e for e in alive if sup[e] < k - 2))
        queued = set(queue)
        while queue:
            e = queue.popleft()
            u, v = e
            nu, nv = g.neighbors(u), g.neighbors(v)
            if stats is not None:
                stats.probes += len(nu) + len(nv)
            for w in _common_alive(nu, nv, u, v, dead):
                for f in ((min(u, w), max(u, w)), (min(v, w), max(v, w))):
                    sup[f] -= 1
                    if sup[f] < k - 2 and f not in queued:
                        queued.add(f)
                        queue.append(f)
            alive.discard(e)
            dead.add(e)
            phi[e] = k - 1
            if stats is not None:
                stats.removals += 1
        k += 1
    return TrussLabeling(phi)
