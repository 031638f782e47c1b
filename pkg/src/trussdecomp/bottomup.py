"""Bottom-up I/O-efficient truss decomposition.

The input edge list is first reduced by a lower-bounding pass that also
strips the 2-class; then classes k = 3, 4, ... are peeled from candidate
neighborhood subgraphs loaded from the shrinking store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .external import (
    BudgetInfeasible,
    ExternalStore,
    MemoryBudget,
    NeighborhoodSubgraph,
    Record,
    ScanCounter,
    Workspace,
    degrees_of,
    extract_neighborhood,
    pack_edges,
    partition_vertices,
    rescue_part,
    rewrite_filtered,
    store_from_graph,
)
from .graph import Edge, Graph
from .inmem import TrussLabeling, decompose_improved
from .support import enumerate_triangles_of_edge, peel, support_of

# cap on partitioned peel passes before switching to edge-at-a-time; None
# means no cap, which is safe because every pass either removes an edge or ends
MAX_ROUNDS: int | None = None

Partitioner = Callable[[int, dict[int, int], MemoryBudget], "list[list[int]] | None"]


def lower_bounding(
    store: ExternalStore,
    budget: MemoryBudget,
    out: ExternalStore,
    mode: str = "lb",
    partitioner: Partitioner | None = None,
    observe_support: Callable[[Edge, int], None] | None = None,
) -> set[Edge]:
    """Move every edge of ``store`` into ``out`` and return the 2-class.

    Each round partitions the remaining graph; for every part P the
    neighborhood subgraph NS(P) is loaded and its internal edges leave the
    store. In ``lb`` mode an edge's record in ``out`` carries the largest
    local truss number seen in any loaded NS; in ``sup`` mode it carries the
    exact support. A triangle is counted once, when its first edge becomes
    internal, and its count is carried on the other two edges until they
    leave, so supports stay exact even though the graph shrinks.
    ``partitioner`` may override the partition of a round by returning parts.
    ``observe_support`` is told the exact support of every edge as it leaves.
    """
    if mode not in ("lb", "sup"):
        raise ValueError(f"unknown mode {mode!r}")
    phi2: set[Edge] = set()
    stuck = False
    rnd = 0
    while len(store):
        deg = degrees_of(store)
        parts = partitioner(rnd, deg, budget) if partitioner is not None and not stuck else None
        if stuck:
            # every remaining edge crossed parts: pack parts around edges instead
            parts = pack_edges((r.edge for r in store.scan()), budget, deg) or [rescue_part(store, budget, deg)]
        elif parts is None:
            parts = partition_vertices(None, budget, degrees=deg)
        rnd += 1
        progressed = False
        for part in parts:
            h = extract_neighborhood(store, part)
            if not h.internal_edges:
                continue
            progressed = True
            found = set()
            for e in h.internal_edges:
                found.update(enumerate_triangles_of_edge(h.graph, e))
            extra: dict[Edge, int] = {}
            for a, b, c in found:
                for e in ((a, b), (a, c), (b, c)):
                    extra[e] = extra.get(e, 0) + 1
            local = decompose_improved(h.graph).phi if mode == "lb" else {}
            updated: dict[Edge, Record] = {}
            for e, r in h.records.items():
                sup = (r.sup or 0) + extra.get(e, 0)
                lb = max(r.lb or 0, local.get(e, 0)) if mode == "lb" else None
                updated[e] = Record(r.u, r.v, sup, lb)
            moved = []
            for e in sorted(h.internal_edges):
                r = updated[e]
                if observe_support is not None:
                    observe_support(e, r.sup)
                if r.sup == 0:
                    phi2.add(e)
                elif mode == "lb":
                    moved.append(Record(r.u, r.v, lb=r.lb))
                else:
                    moved.append(Record(r.u, r.v, sup=r.sup))
            out.append(moved)
            internal = h.internal_edges
            store.rewrite(lambda r: None if r.edge in internal else updated.get(r.edge, r))
        stuck = not progressed
    return phi2


def candidate_vertices_bottomup(store: ExternalStore, k: int) -> set[int]:
    U = set()
    for r in store.scan():
        if r.lb is not None and r.lb <= k:
            U.add(r.u)
            U.add(r.v)
    return U


def bottomup_class(h: NeighborhoodSubgraph, k: int) -> list[Edge]:
    """Internal edges of ``h`` peeled while their support is at most k - 2."""
    return peel(h.graph, sorted(h.internal_edges), k - 2)


def peel_over_budget(
    h: ExternalStore,
    is_candidate: Callable[[Record], bool],
    limit: int,
    budget: MemoryBudget,
    ws: Workspace,
    max_rounds: int | None = MAX_ROUNDS,
) -> list[Edge]:
    """Peel candidate edges of a stored subgraph that does not fit in memory.

    Repeats passes until one removes nothing. A pass works through its
    pending edges in sub-rounds: disjoint parts are packed around pending
    edges, each part's NS is loaded and its internal candidates are peeled.
    Removals are applied to ``h`` once per sub-round, so a later part may
    still see an edge that was just peeled; that only overcounts support,
    never removes an edge wrongly. The first pass checks every candidate;
    later passes only those with an endpoint on an edge removed since, as
    no other support can have dropped. Every sub-round makes at least one
    pending edge internal, so the loop ends without a pass cap; with
    ``max_rounds`` set, later passes check one edge at a time instead.
    Removed edges are deleted from ``h`` and returned in removal order.
    """
    removed_all: list[Edge] = []
    touched: set[int] | None = None
    rounds = 0
    while touched is None or touched:
        if max_rounds is not None and rounds >= max_rounds:
            removed_all.extend(_peel_edge_at_a_time(h, is_candidate, limit, budget, touched))
            break
        rounds += 1
        deg = degrees_of(h)
        if len(h) + len(deg) <= budget.M:
            # shrunk enough to finish in memory with one more scan
            f = extract_neighborhood(h, deg)
            gone = peel(f.graph, sorted(e for e, r in f.records.items() if is_candidate(r)), limit)
            if gone:
                rewrite_filtered(h, set(gone), budget)
            removed_all.extend(gone)
            break
        dirty = touched
        touched = set()
        pending = ws.temp_store()
        pending.write(r for r in h.scan() if is_candidate(r) and (dirty is None or r.u in dirty or r.v in dirty))
        while len(pending):
            parts = pack_edges((r.edge for r in pending.scan()), budget, deg)
            if not parts:
                parts = [rescue_part(h, budget, deg, pending)]
            gone_now: list[Edge] = []
            where: dict[int, int] = {}
            for i, part in enumerate(parts):
                where.update((w, i) for w in part)
                f = extract_neighborhood(h, part)
                cands = sorted(e for e in f.internal_edges if is_candidate(f.records[e]))
                gone_now.extend(peel(f.graph, cands, limit))
            if gone_now:
                rewrite_filtered(h, set(gone_now), budget)
                for u, v in gone_now:
                    deg[u] -= 1
                    deg[v] -= 1
                    touched.update((u, v))
                removed_all.extend(gone_now)
            pending.rewrite(lambda r: None if where.get(r.u, -1) == where.get(r.v, -2) else r)
        ws.discard(pending)
    return removed_all


def _peel_edge_at_a_time(
    h: ExternalStore, is_candidate, limit: int, budget: MemoryBudget, touched: set[int] | None
) -> list[Edge]:
    """Checks candidates one NS({u, v}) at a time; ``touched=None`` means all."""
    removed = []
    first = True
    while first or touched:
        dirty, touched, first = touched, set(), False
        for e in [r.edge for r in h.scan() if is_candidate(r) and (dirty is None or r.u in dirty or r.v in dirty)]:
            f = extract_neighborhood(h, e)
            if e not in f.graph.edge_set:
                continue
            if support_of(f.graph, [e])[e] <= limit:
                rewrite_filtered(h, {e}, budget)
                removed.append(e)
                touched.update(e)
    return removed


def bottomup_class_overbudget(
    h: ExternalStore, U: set[int], k: int, budget: MemoryBudget, ws: Workspace, max_rounds: int | None = MAX_ROUNDS
) -> list[Edge]:
    # an edge with lb > k has truss number above k, so it is never peeled here
    return peel_over_budget(h, lambda r: r.u in U and r.v in U and r.lb <= k, k - 2, budget, ws, max_rounds)


def load_candidate(store: ExternalStore, U: set[int], budget: MemoryBudget, ws: Workspace, keep=None):
    """One scan for NS(U); spills to a temporary store when over budget.

    Returns ``(ns, None)`` when it fits and ``(None, spilled_store)`` otherwise.
    """
    ns = extract_neighborhood(store, U, budget, keep)
    if not ns.overflow:
        return ns, None
    spill = ws.temp_store()
    spill.write(ns.records.values())
    return None, spill


@dataclass
class BottomUpResult:
    labeling: TrussLabeling
    counter: ScanCounter
    lower_bounds: dict[Edge, int] = field(default_factory=dict)
    overbudget_ks: list[int] = field(default_factory=list)


def decompose_bottomup(
    g: Graph,
    budget: MemoryBudget,
    ws: Workspace | None = None,
    partitioner: Partitioner | None = None,
    max_rounds: int | None = MAX_ROUNDS,
    class_sink: Callable[[int, list[Edge]], None] | None = None,
) -> BottomUpResult:
    ws = ws if ws is not None else Workspace()
    source = store_from_graph(g, ws.store("input.edges"))
    g_new = ws.store("g_new.current")
    sups: list[int] = []
    phi2 = lower_bounding(source, budget, g_new, "lb", partitioner, lambda e, s: sups.append(s) if s else None)
    phi = {e: 2 for e in phi2}
    if class_sink is not None:
        class_sink(2, sorted(phi2))
    lower = {}
    min_lb = None
    for r in g_new.scan():
        lower[r.edge] = r.lb
        min_lb = r.lb if min_lb is None else min(min_lb, r.lb)
    lower.update((e, 2) for e in phi2)
    result = BottomUpResult(TrussLabeling(phi), ws.counter, lower)
    # 2-class edges lie on no triangle, so G_new keeps the input supports and
    # is wholly inside T_{s+2} for its smallest support s
    k = max(3, min(sups, default=0) + 2)
    while len(g_new):
        # no remaining edge has a lower bound <= k for smaller k: those classes are empty
        k = max(k, min_lb)
        U = candidate_vertices_bottomup(g_new, k)
        h, spill = load_candidate(g_new, U, budget, ws)
        if h is not None:
            cls = bottomup_class(h, k)
        else:
            result.overbudget_ks.append(k)
            cls = bottomup_class_overbudget(spill, U, k, budget, ws, max_rounds)
            ws.discard(spill)
        for e in cls:
            phi[e] = k
        if class_sink is not None:
            class_sink(k, sorted(cls))
        survivors: list[int] = []
        rewrite_filtered(g_new, set(cls), budget, observe=lambda r: survivors.append(r.lb))
        min_lb = min(survivors, default=k + 1)
        k += 1
    return result


__all__ = [
    "BudgetInfeasible",
    "BottomUpResult",
    "bottomup_class",
    "bottomup_class_overbudget",
    "candidate_vertices_bottomup",
    "decompose_bottomup",
    "lower_bounding",
    "peel_over_budget",
]
