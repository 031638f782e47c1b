import pytest

from trussdecomp.external import (
    BudgetInfeasible,
    ExternalStore,
    MemoryBudget,
    Record,
    ScanCounter,
    Workspace,
    degrees_of,
    extract_neighborhood,
    format_record,
    min_feasible_budget,
    parse_record,
    partition_vertices,
    rescue_part,
    rewrite_filtered,
    scan_report,
    store_from_graph,
)
from trussdecomp.graph import Graph, clique, erdos_renyi

from conftest import EXAMPLE_CLASSES, L, LETTERS


def ns_size(g: Graph, part) -> int:
    """Size of NS(part) straight from the definition."""
    edges = {e for e in g.edges() if e[0] in part or e[1] in part}
    verts = {v for e in edges for v in e} | set(part)
    return len(edges) + len(verts)


def test_budget_validation():
    MemoryBudget(2, 1)
    with pytest.raises(ValueError):
        MemoryBudget(3, 2)
    with pytest.raises(ValueError):
        MemoryBudget(10, 0)
    assert MemoryBudget(10).fits(10) and not MemoryBudget(10).fits(11)


@pytest.mark.parametrize("record", [Record(1, 2), Record(1, 2, sup=3), Record(4, 9, lb=5), Record(0, 1, 2, None, 4)])
def test_record_format_round_trip(record):
    assert parse_record(format_record(record)) == record


@pytest.mark.parametrize("line", ["1", "1 2 x=3", "1 2 s3"])
def test_record_parse_errors(line):
    with pytest.raises(ValueError):
        parse_record(line)


def test_store_file_and_memory_charge_alike(tmp_path, fig2):
    c1, c2 = ScanCounter(), ScanCounter()
    mem = store_from_graph(fig2, ExternalStore(c1))
    disk = store_from_graph(fig2, ExternalStore(c2, tmp_path / "g.edges"))
    for s in (mem, disk):
        list(s.scan())
        s.append([Record(20, 21, sup=0)])
        rewrite_filtered(s, {L("ab")})
    assert c1.snapshot() == c2.snapshot()
    assert mem.peek_all_uncharged() == disk.peek_all_uncharged()
    assert (tmp_path / "g.edges").read_text().splitlines()[0] == "0 2"


def test_scan_report_single_pass(fig2):
    c = ScanCounter()
    s = store_from_graph(fig2, ExternalStore(c))
    before = c.records_read
    list(s.scan())
    rep = scan_report(c, graph_size=26, budget=MemoryBudget(100), k_max=5)
    assert c.records_read - before == 26
    assert rep.full_scan_equivalents == 1.0
    assert rep.bound_shape == 26 / 100 + 5
    text = rep.dumps()
    assert "full_scan_equivalents=1.000000\n" in text
    assert scan_report(c, 26, MemoryBudget(100)).bound_shape is None


def test_block_ios():
    c = ScanCounter(records_read=10, records_written=3)
    assert scan_report(c, 10, MemoryBudget(8, 4)).block_ios == 3 + 1


def check_partition(g, parts, budget):
    flat = [v for p in parts for v in p]
    assert len(flat) == len(set(flat))
    assert set(flat) == {v for v in g.vertices() if g.degree(v)}
    for p in parts:
        assert ns_size(g, set(p)) <= budget.M


def test_partition_fixture_three_parts(fig2):
    budget = MemoryBudget(20)
    parts = partition_vertices(fig2, budget)
    assert len(parts) >= 3
    check_partition(fig2, parts, budget)


def test_partition_single_part(fig2):
    assert partition_vertices(fig2, MemoryBudget(fig2.size)) == [list(range(12))]


def test_partition_clique():
    g = clique(20)
    budget = MemoryBudget(50)
    parts = partition_vertices(g, budget)
    assert len(parts) == 20
    check_partition(g, parts, budget)
    with pytest.raises(BudgetInfeasible, match="vertex 0"):
        partition_vertices(g, MemoryBudget(30))


def test_partition_from_store_matches_graph():
    g = erdos_renyi(60, 0.1, 2)
    store = store_from_graph(g, ExternalStore(ScanCounter()))
    b = MemoryBudget(60)
    assert partition_vertices(store, b) == partition_vertices(g, b)
    assert degrees_of(store) == degrees_of(g)


def test_partition_keep_order():
    deg = {1: 1, 2: 1, 3: 1}
    assert partition_vertices(None, MemoryBudget(6), vertices=[3, 1, 2, 1], degrees=deg, keep_order=True) == [[3, 1], [2]]


def test_min_feasible_budget(fig2):
    assert min_feasible_budget(fig2) == 15 + 13
    assert min_feasible_budget(Graph.from_edges([])) == 2


def test_extract_fixture(fig2):
    U = {LETTERS.index(c) for c in "defg"}
    counter = ScanCounter()
    store = store_from_graph(fig2, ExternalStore(counter))
    before = counter.full_scans
    ns = extract_neighborhood(store, U)
    assert counter.full_scans - before == 1
    assert L("dg") in ns.internal_edges
    assert L("fh") in ns.external_edges
    assert ns.internal_edges.isdisjoint(ns.external_edges)
    assert ns.internal_edges | ns.external_edges == {e for e in fig2.edges() if e[0] in U or e[1] in U}
    # internal endpoints carry their whole neighbor list
    for u in U:
        assert ns.graph.neighbors(u) == fig2.neighbors(u)
    assert extract_neighborhood(fig2, U).internal_edges == ns.internal_edges


def test_extract_trivial(fig2):
    empty = extract_neighborhood(fig2, set())
    assert empty.graph.m == 0 and not empty.internal_edges
    full = extract_neighborhood(fig2, fig2.vertices())
    assert full.graph == fig2
    assert full.internal_edges == set(fig2.edges()) and not full.external_edges


def test_extract_overflow_flag(fig2):
    ns = extract_neighborhood(fig2, fig2.vertices(), MemoryBudget(20))
    assert ns.overflow and ns.size == 38
    assert not extract_neighborhood(fig2, [0], MemoryBudget(20)).overflow


def test_rewrite_filtered(fig2):
    counter = ScanCounter()
    store = ExternalStore(counter)
    store.write(Record(*e) for e in fig2.edges() if e not in EXAMPLE_CLASSES[2])
    rewrite_filtered(store, EXAMPLE_CLASSES[3])
    assert len(store) == 16
    snap = counter.snapshot()
    rewrite_filtered(store, set())
    assert counter.full_scans == snap[2] + 1
    assert len(store) == 16
    rewrite_filtered(store, set(fig2.edges()))
    assert len(store) == 0


def test_rewrite_filtered_chunks_by_budget(fig2):
    counter = ScanCounter()
    store = store_from_graph(fig2, ExternalStore(counter))
    seen = []
    before = counter.full_scans
    rewrite_filtered(store, EXAMPLE_CLASSES[3] | EXAMPLE_CLASSES[2], MemoryBudget(4), observe=seen.append)
    assert counter.full_scans - before == 3  # 10 edges in chunks of 4
    assert len(store) == 16
    assert sorted(r.edge for r in seen) == sorted(r.edge for r in store.peek_all_uncharged())


def test_rescue_part(fig2):
    store = store_from_graph(fig2, ExternalStore(ScanCounter()))
    deg = degrees_of(store)
    part = rescue_part(store, MemoryBudget(20), deg)
    assert len(part) == 2 and tuple(part) in fig2.edge_set
    assert ns_size(fig2, set(part)) <= 20
    with pytest.raises(BudgetInfeasible):
        rescue_part(store, MemoryBudget(8), deg)


def test_workspace_layout(tmp_path):
    ws = Workspace(tmp_path)
    s = ws.store("g_new.current")
    t = ws.temp_store()
    t.write([Record(0, 1)])
    assert (tmp_path / "g_new.current").exists()
    assert t.path.exists()
    ws.discard(t)
    assert not t.path.exists()
    assert s.counter is t.counter
