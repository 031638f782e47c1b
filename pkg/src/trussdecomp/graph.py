"""Undirected simple graphs, text formats and deterministic generators."""

from __future__ import annotations

import io
import random
from dataclasses import dataclass
from typing import Iterable, TextIO

Edge = tuple[int, int]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexNotFound(KeyError):
    pass


class EdgeNotFound(KeyError):
    pass


def canonical(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop ({u}, {v}) is not an edge")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph in sorted adjacency-list form.

    Vertex ids are arbitrary non-negative integers; isolated vertices are
    kept. Edges are canonical ``(u, v)`` tuples with ``u < v`` and are also
    held in a hash set for expected O(1) membership tests.
    """

    __slots__ = ("_adj", "_edge_set", "_m")

    def __init__(self, adjacency: dict[int, Iterable[int]]):
        adj: dict[int, tuple[int, ...]] = {}
        for v in sorted(adjacency):
            adj[v] = tuple(sorted(adjacency[v]))
        edge_set = set()
        for u, nbrs in adj.items():
            for w in nbrs:
                if w == u:
                    raise ValueError(f"self-loop at {u}")
                if u not in adj.get(w, ()):
                    raise ValueError(f"asymmetric adjacency {u} -> {w}")
                if u < w:
                    edge_set.add((u, w))
        self._adj = adj
        self._edge_set = frozenset(edge_set)
        self._m = len(edge_set)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> "Graph":
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                continue
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        # symmetric and loop-free by construction, so skip the checks in __init__
        g = cls.__new__(cls)
        g._adj = {v: tuple(sorted(adj[v])) for v in sorted(adj)}
        g._edge_set = frozenset((u, w) for u, nbrs in g._adj.items() for w in nbrs if u < w)
        g._m = len(g._edge_set)
        return g

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    @property
    def size(self) -> int:
        """|G| = m + n, the unit used by memory budgets."""
        return self._m + len(self._adj)

    def vertices(self) -> list[int]:
        return list(self._adj)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise VertexNotFound(v) from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self._edge_set

    def edges(self) -> list[Edge]:
        """Canonical edges, ascending by ``u`` then ``v``."""
        return [(u, w) for u, nbrs in self._adj.items() for w in nbrs if u < w]

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        return dict(self._adj)

    def edge_subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Subgraph formed by ``edges``; vertices without an edge are dropped."""
        edges = [canonical(u, v) for u, v in edges]
        for e in edges:
            if e not in self.edge_set:
                raise EdgeNotFound(e)
        return Graph.from_edges(edges)

    def without_isolated(self) -> "Graph":
        return Graph({v: nb for v, nb in self._adj.items() if nb})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._edge_set) ^ hash(tuple(self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def validate(g: Graph) -> None:
    """Raise AssertionError unless symmetry, sortedness and simplicity hold."""
    total = 0
    for v in g.vertices():
        nbrs = g.neighbors(v)
        assert all(a < b for a, b in zip(nbrs, nbrs[1:])), f"adjacency of {v} not strictly ascending"
        assert v not in nbrs, f"self-loop at {v}"
        for w in nbrs:
            assert v in g.neighbors(w), f"asymmetric edge {v}-{w}"
        total += len(nbrs)
    assert total == 2 * g.m


# -- text formats -----------------------------------------------------------


@dataclass
class LoadReport:
    self_loops: int = 0
    duplicates: int = 0
    lines: int = 0


def _open_text(source) -> TextIO:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def _vertex(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"non-integer vertex id {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative vertex id {value}", lineno)
    return value


def load_graph(source, fmt: str = "edge-list") -> tuple[Graph, LoadReport]:
    """Parse a graph from text (str, bytes, or a text/binary stream).

    Self-loops are dropped and repeated edges collapsed; both are counted in
    the returned report.
    """
    if fmt not in ("edge-list", "adjacency-list"):
        raise ValueError(f"unknown graph format {fmt!r}")
    report = LoadReport()
    vertices: set[int] = set()
    seen: set[Edge] = set()

    def add(u: int, v: int) -> None:
        if u == v:
            report.self_loops += 1
            vertices.add(u)
            return
        e = (u, v) if u < v else (v, u)
        if e in seen:
            report.duplicates += 1
        else:
            seen.add(e)

    stream = _open_text(source)
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        report.lines += 1
        if fmt == "edge-list":
            parts = line.split()
            if len(parts) == 1:
                # a lone id declares an isolated vertex
                vertices.add(_vertex(parts[0], lineno))
                continue
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {line!r}", lineno)
            u, v = _vertex(parts[0], lineno), _vertex(parts[1], lineno)
            vertices.update((u, v))
            add(u, v)
        else:
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError(f"expected 'u: v1 v2 ...', got {line!r}", lineno)
            u = _vertex(head.strip(), lineno)
            vertices.add(u)
            nbrs = [_vertex(tok, lineno) for tok in tail.split()]
            if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
                raise ParseError(f"neighbors of {u} are not strictly ascending", lineno)
            for v in nbrs:
                vertices.add(v)
                if u == v:
                    report.self_loops += 1
                else:
                    # each edge is normally listed under both endpoints
                    seen.add((u, v) if u < v else (v, u))
    return Graph.from_edges(seen, vertices), report


def dumps_graph(g: Graph, fmt: str = "edge-list") -> str:
    """Byte-deterministic serialization: ascending u, then ascending v."""
    out = []
    if fmt == "edge-list":
        for v in g.vertices():
            nbrs = g.neighbors(v)
            if not nbrs:
                out.append(f"{v}\n")
            for w in nbrs:
                if v < w:
                    out.append(f"{v} {w}\n")
    elif fmt == "adjacency-list":
        for v in g.vertices():
            nbrs = g.neighbors(v)
            out.append(f"{v}: {' '.join(map(str, nbrs))}\n" if nbrs else f"{v}:\n")
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    return "".join(out)


def save_graph(g: Graph, path, fmt: str = "edge-list") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_graph(g, fmt))


def read_graph_file(path, fmt: str = "edge-list") -> tuple[Graph, LoadReport]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_graph(fh, fmt)


# -- generators -------------------------------------------------------------


def clique(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Graph({v: [w for w in range(n) if w != v] for v in range(n)})


def path_graph(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Graph.from_edges(((i, i + 1) for i in range(n - 1)), range(n))


def star(n: int) -> Graph:
    """Center 0 joined to leaves 1..n-1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Graph.from_edges(((0, i) for i in range(1, n)), range(n))


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError(f"invalid G(n, p) parameters n={n} p={p}")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(edges, range(n))


def power_law(n: int, exponent: float, seed: int = 0, avg_degree: float = 6.0) -> Graph:
    """Chung-Lu graph with expected degrees following a power law.

    Vertex i gets weight proportional to (i + 1) ** (-1 / (exponent - 1)),
    scaled so the mean expected degree is ``avg_degree``.
    """
    if n < 0 or exponent <= 2.0 or avg_degree < 0:
        raise ValueError(f"invalid power-law parameters n={n} exponent={exponent}")
    rng = random.Random(seed)
    if n < 2:
        return Graph.from_edges((), range(n))
    raw = [(i + 1) ** (-1.0 / (exponent - 1.0)) for i in range(n)]
    scale = avg_degree * n / sum(raw)
    w = [x * scale for x in raw]
    total = sum(w)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < min(1.0, w[u] * w[v] / total):
                edges.append((u, v))
    return Graph.from_edges(edges, range(n))


def hub_graph(hub_degree: int, extra_edges: int, n: int | None = None, seed: int = 0) -> Graph:
    """A hub joined to ``hub_degree`` vertices plus uniformly random extra edges."""
    if hub_degree < 0 or extra_edges < 0:
        raise ValueError("hub_degree and extra_edges must be >= 0")
    n = n if n is not None else hub_degree + 1
    if n < hub_degree + 1:
        raise ValueError("n too small for hub degree")
    max_extra = (n - 1) * (n - 2) // 2
    if extra_edges > max_extra:
        raise ValueError("too many extra edges for n")
    rng = random.Random(seed)
    edges = {(0, i) for i in range(1, hub_degree + 1)}
    extra: set[Edge] = set()
    while len(extra) < extra_edges:
        u, v = rng.randrange(1, n), rng.randrange(1, n)
        if u != v:
            extra.add(canonical(u, v))
    return Graph.from_edges(sorted(edges | extra), range(n))


def generate_graph(kind: str, *params, seed: int = 0) -> Graph:
    """Dispatch by generator name; deterministic for fixed arguments."""
    try:
        if kind in ("erdos-renyi", "er"):
            n, p = params
            return erdos_renyi(int(n), float(p), seed)
        if kind == "clique":
            (n,) = params
            return clique(int(n))
        if kind in ("power-law", "powerlaw"):
            n, exponent = params[:2]
            avg = float(params[2]) if len(params) > 2 else 6.0
            return power_law(int(n), float(exponent), seed, avg)
        if kind == "path":
            (n,) = params
            return path_graph(int(n))
        if kind == "star":
            (n,) = params
            return star(int(n))
        if kind == "hub":
            hub, extra = params[:2]
            n = int(params[2]) if len(params) > 2 else None
            return hub_graph(int(hub), int(extra), n, seed)
        if kind == "fig2":
            if params:
                raise ValueError("fig2 takes no parameters")
            return example_graph()
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad parameters for {kind}: {params!r} ({exc})") from None
    raise ValueError(f"unknown generator {kind!r}")


# -- the running example ----------------------------------------------------

LETTERS = "abcdefghijkl"
VID = {ch: i for i, ch in enumerate(LETTERS)}


def letter_edge(pair: str) -> Edge:
    return canonical(VID[pair[0]], VID[pair[1]])


FIG2_CLASSES: dict[int, frozenset[Edge]] = {
    2: frozenset(map(letter_edge, ["ik"])),
    3: frozenset(map(letter_edge, ["dg", "dk", "dl", "ef", "eg", "fg", "gh", "gk", "gl"])),
    4: frozenset(map(letter_edge, ["fh", "fi", "fj", "hi", "hj", "ij"])),
    5: frozenset(map(letter_edge, ["ab", "ac", "ad", "ae", "bc", "bd", "be", "cd", "ce", "de"])),
}


def example_graph() -> Graph:
    """The 12-vertex, 26-edge running example; letters a..l map to 0..11."""
    return Graph.from_edges(e for cls in FIG2_CLASSES.values() for e in cls)


def edge_name(e: Edge) -> str:
    u, v = e
    if u < len(LETTERS) and v < len(LETTERS):
        return LETTERS[u] + LETTERS[v]
    return f"{u}-{v}"
