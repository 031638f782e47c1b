"""Reference oracle, labeling verification, k-core decomposition and the
truss-versus-core comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Edge, Graph
from .inmem import TrussLabeling
from .support import peel, support_of


class OracleTooLarge(ValueError):
    pass


def oracle_decompose(g: Graph, limit: int = 300) -> TrussLabeling:
    """Truss numbers straight from the definition.

    For k = 3, 4, ... recompute every support of the surviving subgraph
    from scratch and drop all edges below k - 2 until none are. Edges that
    leave while computing T_k get truss number k - 1. Graphs with more than
    ``limit`` vertices are refused.
    """
    if g.n > limit:
        raise OracleTooLarge(f"oracle refuses n={g.n} > {limit}")
    alive = set(g.edges())
    phi: dict[Edge, int] = {}
    k = 3
    while alive:
        while True:
            nb: dict[int, set[int]] = {}
            for u, v in alive:
                nb.setdefault(u, set()).add(v)
                nb.setdefault(v, set()).add(u)
            weak = {(u, v) for u, v in alive if len(nb[u] & nb[v]) < k - 2}
            if not weak:
                break
            for e in weak:
                phi[e] = k - 1
            alive -= weak
        k += 1
    return TrussLabeling(phi)


@dataclass
class VerifyReport:
    ok: bool = True
    missing: list[Edge] = field(default_factory=list)
    unknown: list[Edge] = field(default_factory=list)
    invalid_levels: list[int] = field(default_factory=list)
    loose_edges: list[Edge] = field(default_factory=list)
    non_maximal_levels: list[int] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"ok={'yes' if self.ok else 'no'}"]
        out.append(f"missing_edges={len(self.missing)}")
        out.append(f"unknown_edges={len(self.unknown)}")
        out.append("invalid_levels=" + ",".join(map(str, self.invalid_levels)))
        out.append(f"loose_edges={len(self.loose_edges)}")
        out.append("non_maximal_levels=" + ",".join(map(str, self.non_maximal_levels)))
        for u, v in self.loose_edges[:20]:
            out.append(f"loose {u} {v}")
        return out


def verify_labeling(g: Graph, labeling: TrussLabeling) -> VerifyReport:
    """Check a labeling against the truss definition without recomputing it.

    Three checks. Validity: each T_k = {e : phi(e) >= k} has every in-T_k
    support >= k - 2. Tightness: an edge with phi(e) = k has fewer than
    k - 1 triangles inside T_{k+1} plus itself. Maximality: peeling T_k at
    support <= k - 2 removes exactly the edges labeled k, so no larger
    subgraph qualifies; with validity this pins the labeling down.
    """
    rep = VerifyReport()
    edges = set(g.edges())
    phi = labeling.phi
    rep.missing = sorted(edges - phi.keys())
    rep.unknown = sorted(phi.keys() - edges)
    if rep.missing or rep.unknown:
        rep.ok = False
        return rep
    top = labeling.k_max
    levels = {k: sorted(e for e, j in phi.items() if j >= k) for k in range(2, top + 2)}
    for k in range(3, top + 1):
        h = Graph.from_edges(levels[k])
        if any(s < k - 2 for s in support_of(h, levels[k]).values()):
            rep.invalid_levels.append(k)
    for k in range(2, top + 1):
        cls = [e for e in levels[k] if phi[e] == k]
        h = Graph.from_edges(levels[k + 1] + cls)
        above = set(levels[k + 1])
        for e in cls:
            # triangles of e whose other two edges both lie in T_{k+1}
            u, v = e
            n = sum(
                1
                for w in h.neighbors(u)
                if w != v and (min(u, w), max(u, w)) in above and (min(v, w), max(v, w)) in above
            )
            if n >= k - 1:
                rep.loose_edges.append(e)
        gone = set(peel(Graph.from_edges(levels[k]), levels[k], k - 2))
        if gone != set(cls):
            rep.non_maximal_levels.append(k)
    rep.loose_edges.sort()
    rep.ok = not (rep.invalid_levels or rep.loose_edges or rep.non_maximal_levels)
    return rep


@dataclass
class CoreLabeling:
    core: dict[int, int]

    @property
    def c_max(self) -> int:
        return max(self.core.values(), default=0)


def core_decompose(g: Graph) -> CoreLabeling:
    """Bucket-based k-core numbers in O(n + m)."""
    deg = {v: g.degree(v) for v in g.vertices()}
    top = max(deg.values(), default=0)
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for v in sorted(deg):
        buckets[deg[v]].append(v)
    core: dict[int, int] = {}
    d = 0
    while len(core) < len(deg):
        while not buckets[d]:
            d += 1
        v = buckets[d].pop()
        if v in core or deg[v] != d:
            continue
        core[v] = d
        for w in g.neighbors(v):
            if w not in core and deg[w] > d:
                deg[w] -= 1
                buckets[deg[w]].append(w)
    return CoreLabeling(core)


def local_clustering(g: Graph) -> dict[int, Fraction]:
    """Local coefficient of every vertex of degree >= 2."""
    has = g.edge_set
    out = {}
    for v in g.vertices():
        nb = g.neighbors(v)
        d = len(nb)
        if d >= 2:
            links = sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if (a, b) in has)
            out[v] = Fraction(2 * links, d * (d - 1))
    return out


def clustering_coefficient(g: Graph) -> Fraction:
    """Mean local clustering over vertices of degree >= 2.

    Returns 0 when no vertex qualifies; ``clustering_defined`` tells the two
    zero cases apart.
    """
    vals = local_clustering(g)
    if not vals:
        return Fraction(0)
    return sum(vals.values(), Fraction(0)) / len(vals)


def clustering_defined(g: Graph) -> bool:
    return any(g.degree(v) >= 2 for v in g.vertices())


def truss_core_violations(g: Graph, labeling: TrussLabeling, cores: CoreLabeling) -> list[tuple[int, Edge]]:
    """Edges of some T_k with an endpoint outside the (k-1)-core."""
    bad = []
    for (u, v), k in sorted(labeling.phi.items()):
        # e is in T_j for every j <= phi(e); the tightest check is j = phi(e)
        if min(cores.core[u], cores.core[v]) < k - 1:
            bad.append((k, (u, v)))
    return bad


@dataclass
class TrussCoreReport:
    n: int
    m: int
    k_max: int
    c_max: int
    truss_vertices: int
    truss_edges: int
    truss_cc: Fraction
    truss_cc_defined: bool
    core_vertices: int
    core_edges: int
    core_cc: Fraction
    core_cc_defined: bool
    containment_violations: int

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("n", str(self.n)),
            ("m", str(self.m)),
            ("k_max", str(self.k_max)),
            ("c_max", str(self.c_max)),
            ("kmax_truss_vertices", str(self.truss_vertices)),
            ("kmax_truss_edges", str(self.truss_edges)),
            ("kmax_truss_clustering", f"{float(self.truss_cc):.6f}"),
            ("kmax_truss_clustering_defined", "yes" if self.truss_cc_defined else "no"),
            ("cmax_core_vertices", str(self.core_vertices)),
            ("cmax_core_edges", str(self.core_edges)),
            ("cmax_core_clustering", f"{float(self.core_cc):.6f}"),
            ("cmax_core_clustering_defined", "yes" if self.core_cc_defined else "no"),
            ("truss_in_core_violations", str(self.containment_violations)),
        ]

    def dumps(self, fmt: str = "kv") -> str:
        rows = self.rows()
        if fmt == "kv":
            return "".join(f"{k}={v}\n" for k, v in rows)
        if fmt == "text":
            w = max(len(k) for k, _ in rows)
            return "".join(f"{k.ljust(w)}  {v}\n" for k, v in rows)
        raise ValueError(f"unknown format {fmt!r}")


def truss_vs_core(g: Graph, labeling: TrussLabeling, cores: CoreLabeling | None = None) -> TrussCoreReport:
    cores = cores if cores is not None else core_decompose(g)
    k = labeling.k_max
    truss = Graph.from_edges(sorted(labeling.truss_edges(k))) if k else Graph.from_edges([])
    c = cores.c_max
    members = {v for v, j in cores.core.items() if j >= c}
    core_g = Graph.from_edges([(u, v) for u, v in g.edges() if u in members and v in members], vertices=members)
    return TrussCoreReport(
        g.n, g.m, k, c,
        truss.n, truss.m, clustering_coefficient(truss), clustering_defined(truss),
        core_g.n, core_g.m, clustering_coefficient(core_g), clustering_defined(core_g),
        len(truss_core_violations(g, labeling, cores)),
    )
