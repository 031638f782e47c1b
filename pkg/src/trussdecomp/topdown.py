"""Top-down truss decomposition for the t largest classes.

Exact supports are gathered while stripping the 2-class, an upper bound on
every truss number is derived from them, and classes are then extracted
from k = max upper bound downwards. After each class, stored edges that no
longer share a triangle with an undecided edge are pruned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .bottomup import MAX_ROUNDS, load_candidate, lower_bounding, peel_over_budget
from .external import (
    ExternalStore,
    MemoryBudget,
    NeighborhoodSubgraph,
    ScanCounter,
    Workspace,
    degrees_of,
    extract_neighborhood,
    partition_vertices,
    rewrite_filtered,
    store_from_graph,
    vertex_bound,
)
from .graph import Edge, Graph
from .inmem import TrussLabeling, decompose_improved
from .support import peel


def h_index(values) -> int:
    """Largest x such that at least x of ``values`` are >= x."""
    x = 0
    for i, s in enumerate(sorted(values, reverse=True)):
        if s >= i + 1:
            x = i + 1
        else:
            break
    return x


def h_index_without_each(values: list[int]) -> list[int]:
    """For each position i, the h-index of ``values`` with entry i left out."""
    h = h_index(values)
    at_least = sum(1 for s in values if s >= h)
    return [h if s < h or at_least > h else h - 1 for s in values]


def endpoint_bounds(g: Graph, sup: dict[Edge, int], w: int) -> dict[Edge, int]:
    """x_w(e) + 2 for each edge e at w, x_w(e) being the h-index of the
    supports of the other edges at w."""
    incident = [(min(w, z), max(w, z)) for z in g.neighbors(w)]
    xs = h_index_without_each([sup[e] for e in incident])
    return {e: x + 2 for e, x in zip(incident, xs)}


def upper_bounding(store: ExternalStore, budget: MemoryBudget) -> None:
    """Annotate every record with psi = min(sup, x_u, x_v) + 2 >= its truss number.

    x_u only needs the edges at u, so one partition round suffices: each
    part folds the bound from its own vertices into the records, and an
    edge crossing two parts receives one endpoint term from each.
    """
    deg = degrees_of(store)
    for part in partition_vertices(None, budget, degrees=deg):
        h = extract_neighborhood(store, part)
        sup = {}
        for e, r in h.records.items():
            if r.sup is None:
                raise ValueError(f"record {r.u} {r.v} has no support annotation")
            sup[e] = r.sup
        bound: dict[Edge, int] = {}
        for w in part:
            for e, x in endpoint_bounds(h.graph, sup, w).items():
                prev = bound.get(e, h.records[e].ub)
                bound[e] = min(x, sup[e] + 2) if prev is None else min(prev, x)
        store.rewrite(lambda r: r._replace(ub=bound[r.edge]) if r.edge in bound else r)


def upper_bound_of(g: Graph, sup: dict[Edge, int], e: Edge) -> int:
    """psi(e) computed directly on an in-memory graph with known supports."""
    u, v = e
    return min(sup[e] + 2, endpoint_bounds(g, sup, u)[e], endpoint_bounds(g, sup, v)[e])


def candidate_vertices_topdown(store: ExternalStore, k: int, decided: dict[Edge, int]) -> set[int]:
    U = set()
    for r in store.scan():
        if r.ub is not None and r.ub >= k and r.edge not in decided:
            U.add(r.u)
            U.add(r.v)
    return U


def topdown_class(h: NeighborhoodSubgraph, k: int, decided: dict[Edge, int]) -> set[Edge]:
    """Undecided internal edges of ``h`` that survive peeling at support < k - 2.

    ``h`` must hold only edges whose upper bound is at least k; decided
    edges are in a higher truss and are never peeled.
    """
    cands = sorted(e for e in h.internal_edges if e not in decided)
    gone = set(peel(h.graph, cands, k - 3))
    return {e for e in cands if e not in gone}


def topdown_class_overbudget(
    h: ExternalStore,
    U: set[int],
    k: int,
    budget: MemoryBudget,
    ws: Workspace,
    decided: dict[Edge, int],
    max_rounds: int | None = MAX_ROUNDS,
) -> set[Edge]:
    def is_candidate(r):
        return r.u in U and r.v in U and r.edge not in decided

    peel_over_budget(h, is_candidate, k - 3, budget, ws, max_rounds)
    return {r.edge for r in h.scan() if is_candidate(r)}


def prune_decided(store: ExternalStore, decided: dict[Edge, int], k: int, budget: MemoryBudget) -> set[Edge]:
    """Delete decided edges all of whose stored triangles close on decided
    edges of level >= k. Returns the decided edges left in the store."""
    stored = [r.edge for r in store.scan() if r.edge in decided]
    if not stored:
        return set()
    deg = degrees_of(store)
    batches: list[tuple[set[int], list[Edge]]] = []
    verts: set[int] = set()
    edges: list[Edge] = []
    bound = 0
    for e in stored:
        new = [w for w in e if w not in verts]
        add = sum(vertex_bound(deg[w]) for w in new)
        if edges and bound + add > budget.M:
            batches.append((verts, edges))
            verts, edges, bound = set(), [], 0
            new = list(e)
            add = sum(vertex_bound(deg[w]) for w in new)
        verts.update(new)
        edges.append(e)
        bound += add
    batches.append((verts, edges))
    removable = set()
    for verts, edges in batches:
        f = extract_neighborhood(store, verts)
        has = f.graph.edge_set
        for u, v in edges:
            ok = True
            vn = set(f.graph.neighbors(v))
            for w in f.graph.neighbors(u):
                if w == v or w not in vn:
                    continue
                e1, e2 = (min(u, w), max(u, w)), (min(v, w), max(v, w))
                if e1 in has and e2 in has and (decided.get(e1, 0) < k or decided.get(e2, 0) < k):
                    ok = False
                    break
            if ok:
                removable.add((u, v))
    rewrite_filtered(store, removable, budget)
    return set(stored) - removable


def find_kinit(store: ExternalStore, budget: MemoryBudget, k_first: int) -> int | None:
    """Smallest k >= 3 whose candidate subgraph is guaranteed to fit in memory."""
    deg: dict[int, int] = {}
    top: dict[int, int] = {}
    for r in store.scan():
        for w in (r.u, r.v):
            deg[w] = deg.get(w, 0) + 1
            top[w] = max(top.get(w, 0), r.ub)
    need = {}
    for w, t in top.items():
        need[t] = need.get(t, 0) + vertex_bound(deg[w])
    total = 0
    best = None
    for k in range(k_first, 2, -1):
        total += need.get(k, 0)
        if total > budget.M:
            break
        best = k
    return best


@dataclass
class TopDownResult:
    labeling: TrussLabeling
    counter: ScanCounter
    k_max: int
    t: int
    completed: bool
    exhausted: bool
    upper_bounds: dict[Edge, int] = field(default_factory=dict)
    survivors: dict[int, set[Edge]] = field(default_factory=dict)
    k_first: int = 0
    k_init: int | None = None
    overbudget_ks: list[int] = field(default_factory=list)
    # the decided map is held in memory; flagged when it outgrows M
    decided_over_budget: bool = False


def decompose_topdown(
    g: Graph,
    t: int,
    budget: MemoryBudget,
    ws: Workspace | None = None,
    use_kinit: bool = True,
    max_rounds: int | None = MAX_ROUNDS,
    before_level: Callable[[int, ExternalStore], None] | None = None,
) -> TopDownResult:
    """Exact classes for k_max >= k > k_max - t.

    ``completed`` is true when the whole decomposition is known (the store
    emptied); ``exhausted`` when that happened before t classes were reached.
    ``before_level(k, store)`` sees the store just before Phi_k is extracted.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    ws = ws if ws is not None else Workspace()
    source = store_from_graph(g, ws.store("input.edges"))
    g_new = ws.store("g_new.current")
    phi2 = lower_bounding(source, budget, g_new, "sup")
    upper_bounding(g_new, budget)
    ub = {r.edge: r.ub for r in g_new.scan()}
    k_first = max(ub.values(), default=2)
    ub.update((e, 2) for e in phi2)
    decided: dict[Edge, int] = {}
    survivors: dict[int, set[Edge]] = {}
    result = TopDownResult(TrussLabeling(), ws.counter, 0, t, False, False, ub, survivors, k_first)
    k_max: int | None = None
    lowest: int | None = None
    k = k_first

    if use_kinit and len(g_new):
        k_init = find_kinit(g_new, budget, k_first)
        if k_init is not None:
            result.k_init = k_init
            x = [r.edge for r in g_new.scan() if r.ub >= k_init]
            local = decompose_improved(Graph.from_edges(x)).phi
            for e, j in local.items():
                if j >= k_init:
                    decided[e] = j
            if decided:
                k_max = max(decided.values())
                lowest = k_max - t + 1
            survivors[k_init] = prune_decided(g_new, decided, k_init, budget)
            k = k_init - 1

    while len(g_new) and k >= 3 and (lowest is None or k >= lowest):
        U = candidate_vertices_topdown(g_new, k, decided)
        if not U:
            k -= 1
            continue
        if before_level is not None:
            before_level(k, g_new)
        h, spill = load_candidate(g_new, U, budget, ws, keep=lambda r, k=k: r.ub >= k)
        if h is not None:
            cls = topdown_class(h, k, decided)
        else:
            result.overbudget_ks.append(k)
            cls = topdown_class_overbudget(spill, U, k, budget, ws, decided, max_rounds)
            ws.discard(spill)
        for e in cls:
            decided[e] = k
        if cls and k_max is None:
            k_max = k
            lowest = k_max - t + 1
        survivors[k] = prune_decided(g_new, decided, k, budget)
        result.decided_over_budget |= len(decided) > budget.M
        k -= 1

    result.completed = len(g_new) == 0
    if k_max is None:
        k_max = 2 if phi2 else 0
        lowest = k_max - t + 1
    result.k_max = k_max
    result.exhausted = result.completed and lowest < 2 and k_max > 0
    phi = {e: j for e, j in decided.items() if j >= lowest}
    if 2 >= lowest:
        phi.update((e, 2) for e in phi2)
    result.labeling = TrussLabeling(phi)
    return result
