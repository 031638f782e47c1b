"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own support and peeling
code: triangles come from all-triples enumeration and truss numbers from
networkx's k_truss, so agreement is real evidence.
"""

from itertools import combinations

import networkx as nx
import pytest

from trussdecomp.graph import Graph, example_graph

LETTERS = "abcdefghijkl"


def L(pair: str) -> tuple[int, int]:
    u, v = (LETTERS.index(c) for c in pair)
    return (min(u, v), max(u, v))


def Ls(*pairs: str) -> set[tuple[int, int]]:
    return {L(p) for p in pairs}


# the four classes exactly as the running example lists them
EXAMPLE_CLASSES = {
    2: Ls("ik"),
    3: Ls("dg", "dk", "dl", "ef", "eg", "fg", "gh", "gk", "gl"),
    4: Ls("fh", "fi", "fj", "hi", "hj", "ij"),
    5: Ls("ab", "ac", "ad", "ae", "bc", "bd", "be", "cd", "ce", "de"),
}


def brute_support(g: Graph) -> dict[tuple[int, int], int]:
    """O(n^3): count every vertex triple that closes a triangle."""
    sup = {e: 0 for e in g.edges()}
    has = g.edge_set
    for a, b, c in combinations(g.vertices(), 3):
        if (a, b) in has and (a, c) in has and (b, c) in has:
            for e in ((a, b), (a, c), (b, c)):
                sup[e] += 1
    return sup


def nx_truss_numbers(g: Graph) -> dict[tuple[int, int], int]:
    """Truss numbers via networkx: phi(e) = largest k with e in k_truss(G, k)."""
    h = nx.Graph(g.edges())
    phi = {e: 2 for e in g.edges()}
    k = 3
    while h.number_of_edges():
        h = nx.k_truss(h, k)
        for u, v in h.edges():
            phi[(min(u, v), max(u, v))] = k
        k += 1
    return phi


def labels_by_class(phi: dict) -> dict[int, set]:
    out: dict[int, set] = {}
    for e, k in phi.items():
        out.setdefault(k, set()).add(e)
    return out


@pytest.fixture
def fig2() -> Graph:
    return example_graph()


# a hand-picked three-part partition of the running example
SAMPLE_PARTS = [
    [LETTERS.index(c) for c in "abcl"],
    [LETTERS.index(c) for c in "defg"],
    [LETTERS.index(c) for c in "hijk"],
]


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
