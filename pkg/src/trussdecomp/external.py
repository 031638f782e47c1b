"""Simulated external memory: budgets, scan accounting, sequential edge
stores, vertex partitioning and neighborhood-subgraph extraction.

Sizes are abstract units (one per vertex plus one per edge), so budget
checks are exact and independent of the host machine.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple

from .graph import Edge, Graph


class BudgetInfeasible(RuntimeError):
    """A single vertex (or seed edge) does not fit the memory budget."""


@dataclass(frozen=True)
class MemoryBudget:
    M: int
    B: int = 1

    def __post_init__(self):
        if self.B < 1 or self.M < 2 * self.B:
            raise ValueError(f"need 1 <= B <= M/2, got M={self.M} B={self.B}")

    def fits(self, size: int) -> bool:
        return size <= self.M


@dataclass
class ScanCounter:
    records_read: int = 0
    records_written: int = 0
    full_scans: int = 0
    write_passes: int = 0

    def snapshot(self) -> tuple[int, int, int, int]:
        return (self.records_read, self.records_written, self.full_scans, self.write_passes)


class Record(NamedTuple):
    u: int
    v: int
    sup: int | None = None
    lb: int | None = None
    ub: int | None = None

    @property
    def edge(self) -> Edge:
        return (self.u, self.v)


def format_record(r: Record) -> str:
    parts = [str(r.u), str(r.v)]
    if r.sup is not None:
        parts.append(f"s={r.sup}")
    if r.lb is not None:
        parts.append(f"lb={r.lb}")
    if r.ub is not None:
        parts.append(f"ub={r.ub}")
    return " ".join(parts)


def parse_record(line: str) -> Record:
    parts = line.split()
    if len(parts) < 2:
        raise ValueError(f"bad store record {line!r}")
    ann = {"s": None, "lb": None, "ub": None}
    for tok in parts[2:]:
        key, sep, val = tok.partition("=")
        if not sep or key not in ann:
            raise ValueError(f"bad annotation {tok!r}")
        ann[key] = int(val)
    return Record(int(parts[0]), int(parts[1]), ann["s"], ann["lb"], ann["ub"])


class ExternalStore:
    """Edge records with sequential access only: scan, append, rewrite.

    Backed by a text file when ``path`` is given, else by a list. Both
    charge the counter identically.
    """

    def __init__(self, counter: ScanCounter, path: str | os.PathLike | None = None):
        self.counter = counter
        self.path = Path(path) if path is not None else None
        self._records: list[Record] = []
        self._count = 0
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("")

    def __len__(self) -> int:
        return self._count

    def _read_raw(self) -> Iterator[Record]:
        if self.path is None:
            return iter(self._records.copy())
        return self._read_file()

    def _read_file(self) -> Iterator[Record]:
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield parse_record(line)

    def _store_raw(self, records: list[Record], append: bool = False) -> None:
        if self.path is None:
            if append:
                self._records.extend(records)
            else:
                self._records = list(records)
        else:
            mode = "a" if append else "w"
            with open(self.path, mode, encoding="utf-8", newline="\n") as fh:
                fh.writelines(format_record(r) + "\n" for r in records)
        self._count = self._count + len(records) if append else len(records)

    def scan(self) -> Iterator[Record]:
        """A full sequential pass; the whole store is charged up front."""
        self.counter.full_scans += 1
        self.counter.records_read += self._count
        return self._read_raw()

    def append(self, records: Iterable[Record]) -> None:
        records = list(records)
        if not records:
            return
        self.counter.records_written += len(records)
        self._store_raw(records, append=True)

    def write(self, records: Iterable[Record]) -> None:
        """Replace the content; records are written in canonical edge order."""
        records = sorted(records, key=lambda r: (r.u, r.v))
        self.counter.write_passes += 1
        self.counter.records_written += len(records)
        self._store_raw(records)

    def rewrite(self, fn: Callable[[Record], Record | None]) -> None:
        """One read pass and one write pass; ``fn`` maps or drops records."""
        out = []
        for r in self.scan():
            r2 = fn(r)
            if r2 is not None:
                out.append(r2)
        self.write(out)

    def peek_all_uncharged(self) -> list[Record]:
        """Test/debug access; never used by the algorithms."""
        return list(self._read_raw())


class Workspace:
    """Creates stores sharing one counter, in memory or under a run directory."""

    def __init__(self, root: str | os.PathLike | None = None, counter: ScanCounter | None = None):
        self.root = Path(root) if root is not None else None
        self.counter = counter if counter is not None else ScanCounter()
        self._tmp = 0

    def store(self, name: str) -> ExternalStore:
        path = self.root / name if self.root is not None else None
        return ExternalStore(self.counter, path)

    def temp_store(self) -> ExternalStore:
        self._tmp += 1
        return self.store(f"tmp/h{self._tmp}.edges")

    def discard(self, store: ExternalStore) -> None:
        if store.path is not None and store.path.exists():
            store.path.unlink()


def store_from_graph(g: Graph, store: ExternalStore) -> ExternalStore:
    store.write(Record(u, v) for u, v in g.edges())
    return store


# -- partitioning -------------------------------------------------------------


def vertex_bound(degree: int) -> int:
    """Upper bound on |NS({v})|: v, its neighbors and its edges."""
    return 1 + 2 * degree


def degrees_of(source) -> dict[int, int]:
    """Current degrees; one scan when ``source`` is a store."""
    if isinstance(source, Graph):
        return {v: source.degree(v) for v in source.vertices() if source.degree(v) > 0}
    if isinstance(source, ExternalStore):
        deg: dict[int, int] = {}
        for r in source.scan():
            deg[r.u] = deg.get(r.u, 0) + 1
            deg[r.v] = deg.get(r.v, 0) + 1
        return deg
    return dict(source)


def partition_vertices(
    source,
    budget: MemoryBudget,
    vertices: Iterable[int] | None = None,
    degrees: dict[int, int] | None = None,
    keep_order: bool = False,
) -> list[list[int]]:
    """Sequential partitioner: sweep vertices in ascending id (or in the given
    order with ``keep_order``), closing a part when the bound on its
    neighborhood-subgraph size would exceed M.
    """
    deg = degrees if degrees is not None else degrees_of(source)
    if vertices is None:
        verts = sorted(deg)
        total = len(verts) + sum(deg.values()) // 2
        if verts and total <= budget.M:
            return [verts]
    else:
        verts = list(dict.fromkeys(vertices)) if keep_order else sorted(vertices)
    parts: list[list[int]] = []
    cur: list[int] = []
    bound = 0
    for v in verts:
        b = vertex_bound(deg.get(v, 0))
        if b > budget.M:
            raise BudgetInfeasible(f"vertex {v} has neighborhood bound {b} > M={budget.M}")
        if cur and bound + b > budget.M:
            parts.append(cur)
            cur, bound = [], 0
        cur.append(v)
        bound += b
    if cur:
        parts.append(cur)
    return parts


def pack_edges(
    edges: Iterable[Edge],
    budget: MemoryBudget,
    degrees: dict[int, int],
) -> list[list[int]]:
    """Disjoint vertex parts grown around the given edges, in order.

    An edge joins the open part when the part's bound still fits M;
    otherwise the part closes and the edge starts a fresh one. Edges
    touching a closed part, or too large on their own, are left for a later
    call. The bound for a part P with degree sum D, of which I distinct
    edges are already known to lie inside P, is (D - I) edges plus
    min(n, |P| + D - 2I) vertices, n being the vertex count of the graph.
    """
    n = len(degrees)

    def size(members: int, dsum: int, inside: int) -> int:
        return dsum - inside + min(n, members + dsum - 2 * inside)

    closed: set[int] = set()
    parts: list[list[int]] = []
    cur: list[int] = []
    members: set[int] = set()
    dsum = inside = 0
    for u, v in edges:
        if u in closed or v in closed:
            continue
        new = [w for w in (u, v) if w not in members]
        add = sum(degrees.get(w, 0) for w in new)
        if size(len(cur) + len(new), dsum + add, inside + 1) <= budget.M:
            cur.extend(new)
            members.update(new)
            dsum += add
            inside += 1
            continue
        if len(new) < 2 or size(2, add, 1) > budget.M:
            continue
        if cur:
            parts.append(cur)
            closed.update(cur)
        cur, members, dsum, inside = [u, v], {u, v}, add, 1
    if cur:
        parts.append(cur)
    return parts


def rescue_part(
    store: "ExternalStore",
    budget: MemoryBudget,
    degrees: dict[int, int],
    pending: "ExternalStore | None" = None,
    keep: Callable[[Record], bool] | None = None,
) -> list[int]:
    """A two-vertex part that makes one more edge internal.

    Used when a sweep left every remaining edge crossing parts. Picks the
    pending edge (kept by ``keep``) with the smallest degree bound and checks
    its exact neighborhood size in ``store`` with one more scan.
    """
    best = None
    for r in (pending if pending is not None else store).scan():
        if keep is not None and not keep(r):
            continue
        b = vertex_bound(degrees.get(r.u, 0)) + vertex_bound(degrees.get(r.v, 0))
        if best is None or (b, r.edge) < best:
            best = (b, r.edge)
    if best is None:
        return []
    e = best[1]
    size = extract_neighborhood(store, e).size
    if size > budget.M:
        raise BudgetInfeasible(f"edge {e[0]} {e[1]} has neighborhood size {size} > M={budget.M}")
    return list(e)


def min_feasible_budget(g: Graph) -> int:
    """Smallest M for which every edge can be made internal to some part."""
    return max((vertex_bound(g.degree(u)) + vertex_bound(g.degree(v)) for u, v in g.edges()), default=2)


# -- neighborhood subgraphs ---------------------------------------------------


@dataclass
class NeighborhoodSubgraph:
    internal: frozenset[int]
    graph: Graph
    internal_edges: set[Edge]
    external_edges: set[Edge]
    records: dict[Edge, Record] = field(default_factory=dict)
    overflow: bool = False

    @property
    def size(self) -> int:
        return self.graph.size


def _assemble(U: frozenset[int], edges: list[Edge], records: dict[Edge, Record], budget: MemoryBudget | None) -> NeighborhoodSubgraph:
    g = Graph.from_edges(edges)
    internal: set[Edge] = set()
    external: set[Edge] = set()
    for e in edges:
        (internal if e[0] in U and e[1] in U else external).add(e)
    ns = NeighborhoodSubgraph(U, g, internal, external, records)
    ns.overflow = budget is not None and not budget.fits(ns.size)
    return ns


def extract_neighborhood(
    source, U: Iterable[int], budget: MemoryBudget | None = None, keep: Callable[[Record], bool] | None = None
) -> NeighborhoodSubgraph:
    """NS(U): all edges with at least one endpoint in U.

    From a store this costs exactly one scan; ``keep`` filters records on
    the way in. ``overflow`` is set when the result is larger than the budget.
    """
    U = frozenset(U)
    if isinstance(source, Graph):
        edges = sorted({(min(u, w), max(u, w)) for u in U if u in source for w in source.neighbors(u)})
        return _assemble(U, edges, {}, budget)
    records = {}
    if U:
        for r in source.scan():
            # records are (u, v, ...) tuples; plain indexing keeps this loop cheap
            if (r[0] in U or r[1] in U) and (keep is None or keep(r)):
                records[r[0], r[1]] = r
    return _assemble(U, list(records), records, budget)


def rewrite_filtered(
    store: ExternalStore,
    drop: set[Edge] | frozenset,
    budget: MemoryBudget | None = None,
    observe: Callable[[Record], None] | None = None,
) -> ExternalStore:
    """Remove ``drop`` from the store; one read+write pass per M-sized chunk.

    ``observe`` sees every surviving record during the final pass.
    """
    if budget is None or len(drop) <= budget.M:
        chunks = [set(drop)]
    else:
        ordered = sorted(drop)
        chunks = [set(ordered[i:i + budget.M]) for i in range(0, len(ordered), budget.M)]
    for i, chunk in enumerate(chunks):
        last = i == len(chunks) - 1

        def fn(r, c=chunk, last=last):
            if r.edge in c:
                return None
            if last and observe is not None:
                observe(r)
            return r

        store.rewrite(fn)
    return store


# -- reporting ----------------------------------------------------------------


@dataclass
class ScanReport:
    records_read: int
    records_written: int
    full_scans: int
    write_passes: int
    graph_size: int
    M: int
    B: int
    k_max: int | None = None

    @property
    def full_scan_equivalents(self) -> float:
        return self.records_read / self.graph_size if self.graph_size else 0.0

    @property
    def block_ios(self) -> int:
        return math.ceil(self.records_read / self.B) + math.ceil(self.records_written / self.B)

    @property
    def bound_shape(self) -> float | None:
        """m/M + k_max, the scan-count shape the measured value is held to."""
        if self.k_max is None:
            return None
        return self.graph_size / self.M + self.k_max

    def dumps(self) -> str:
        rows = [
            ("records_read", self.records_read),
            ("records_written", self.records_written),
            ("full_scans", self.full_scans),
            ("write_passes", self.write_passes),
            ("graph_records", self.graph_size),
            ("M", self.M),
            ("B", self.B),
            ("block_ios", self.block_ios),
            ("full_scan_equivalents", f"{self.full_scan_equivalents:.6f}"),
        ]
        if self.k_max is not None:
            rows.append(("k_max", self.k_max))
            rows.append(("bound_m_over_M_plus_kmax", f"{self.bound_shape:.6f}"))
        return "".join(f"{k}={v}\n" for k, v in rows)


def scan_report(counter: ScanCounter, graph_size: int, budget: MemoryBudget, k_max: int | None = None) -> ScanReport:
    return ScanReport(
        counter.records_read,
        counter.records_written,
        counter.full_scans,
        counter.write_passes,
        graph_size,
        budget.M,
        budget.B,
        k_max,
    )
