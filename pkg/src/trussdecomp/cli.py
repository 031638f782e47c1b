"""Command-line front end.

    trussdecomp decompose GRAPH [--algo ALGO] [--memory M] [--block B] [--t T | --all] [--out DIR]
    trussdecomp verify GRAPH LABELING
    trussdecomp stats GRAPH
    trussdecomp gen KIND [PARAMS...] [--seed S] [--out FILE]

Exit status: 0 ok, 1 verification failed, 2 bad input or config,
3 memory budget or size limit infeasible.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import shutil
import sys
from pathlib import Path

from .analysis import oracle_decompose, truss_vs_core, verify_labeling
from .bottomup import decompose_bottomup
from .external import BudgetInfeasible, MemoryBudget, Workspace, scan_report
from .graph import ParseError, dumps_graph, generate_graph, read_graph_file
from .inmem import decompose_baseline, decompose_improved, load_labeling
from .support import ProbeStats
from .topdown import decompose_topdown

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3
OUT_ENV = "TRUSSDECOMP_OUT"
ALGOS = ("inmem-baseline", "inmem", "bottomup", "topdown")
FORMATS = ("edge-list", "adjacency-list")


class InputError(Exception):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _load(path: str, fmt: str):
    try:
        return read_graph_file(path, fmt)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _run(args, g):
    """Returns (labeling, report text, extra manifest rows)."""
    extra: list[tuple[str, str]] = []
    if args.algo in ("inmem", "inmem-baseline"):
        stats = ProbeStats()
        fn = decompose_improved if args.algo == "inmem" else decompose_baseline
        lab = fn(g, stats)
        report = f"algo={args.algo}\nprobes={stats.probes}\nremovals={stats.removals}\n"
        return lab, report, extra

    M = args.memory if args.memory is not None else max(g.size, 2 * args.block)
    budget = MemoryBudget(M, args.block)
    work = Path(args.out) / "work"
    if work.exists():
        shutil.rmtree(work)
    ws = Workspace(work)
    if args.algo == "bottomup":
        res = decompose_bottomup(g, budget, ws)
        lab = res.labeling
        k_max = lab.k_max
    else:
        res = decompose_topdown(g, args.t, budget, ws, use_kinit=not args.no_kinit)
        lab = res.labeling
        k_max = res.k_max
        extra += [
            ("k_max", str(res.k_max)),
            ("completed", str(res.completed).lower()),
            ("exhausted", str(res.exhausted).lower()),
            ("k_init", "none" if res.k_init is None else str(res.k_init)),
        ]
    report = f"algo={args.algo}\n" + scan_report(ws.counter, g.size, budget, k_max).dumps()
    extra.append(("M", str(M)))
    return lab, report, extra


def cmd_decompose(args) -> int:
    if args.algo == "topdown":
        if args.all:
            args.t = sys.maxsize
        elif args.t is None:
            raise InputError("topdown needs --t T or --all")
        elif args.t < 1:
            raise InputError("--t must be >= 1")
    elif args.t is not None or args.all:
        raise InputError("--t/--all only apply to --algo topdown")
    if args.block < 1 or (args.memory is not None and args.memory < 2 * args.block):
        raise InputError(f"need 1 <= B <= M/2 (got M={args.memory}, B={args.block})")

    g, load = _load(args.graph, args.format)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("phi_*.edges"):
        old.unlink()

    lab, report, extra = _run(args, g)

    oracle = "off"
    if args.oracle_limit:
        if g.m > args.oracle_limit:
            oracle = "skipped"
        else:
            ref = oracle_decompose(g, args.oracle_limit)
            lo = min(lab.phi.values(), default=0)
            same = {e: k for e, k in ref.phi.items() if k >= lo} == lab.phi
            oracle = "match" if same else "mismatch"

    artifacts = ["labeling.txt", "scan_report.txt"]
    _write(out / "labeling.txt", lab.dumps())
    _write(out / "scan_report.txt", report)
    for k, cls in lab.classes().items():
        name = f"phi_{k}.edges"
        _write(out / name, "".join(f"{u} {v}\n" for u, v in sorted(cls)))
        artifacts.append(name)

    rows = [
        ("input", args.graph),
        ("input_sha256", _sha256(Path(args.graph))),
        ("format", args.format),
        ("algo", args.algo),
        ("t", "all" if args.all else ("none" if args.t is None else str(args.t))),
        ("memory", "auto" if args.memory is None else str(args.memory)),
        ("block", str(args.block)),
        ("seed", str(args.seed)),
        ("kinit", "off" if args.no_kinit else "on"),
        ("oracle_limit", str(args.oracle_limit)),
        ("n", str(g.n)),
        ("m", str(g.m)),
        ("self_loops_dropped", str(load.self_loops)),
        ("duplicates_dropped", str(load.duplicates)),
        ("oracle", oracle),
    ] + extra
    rows += [(f"sha256 {name}", _sha256(out / name)) for name in sorted(artifacts)]
    _write(out / "manifest.txt", "".join(f"{k}={v}\n" for k, v in rows))

    counts = " ".join(f"{k}:{len(c)}" for k, c in lab.classes().items())
    print(f"k_max={dict(extra).get('k_max', lab.k_max)}")
    print(f"classes {counts}")
    print(f"artifacts in {out}")
    if oracle == "mismatch":
        print("oracle mismatch", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    g, _ = _load(args.graph, args.format)
    try:
        text = Path(args.labeling).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.labeling}: {exc.strerror or exc}") from None
    try:
        lab = load_labeling(text)
    except ParseError as exc:
        raise InputError(f"{args.labeling}: {exc}") from None
    rep = verify_labeling(g, lab)
    if rep.missing or rep.unknown:
        first = (rep.missing or rep.unknown)[0]
        what = "unlabeled graph edge" if rep.missing else "labeled edge not in graph"
        raise InputError(
            f"edge sets differ: {len(rep.missing)} unlabeled, {len(rep.unknown)} unknown; "
            f"first {what} {first[0]} {first[1]}"
        )
    for line in rep.lines():
        print(line)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_stats(args) -> int:
    g, _ = _load(args.graph, args.format)
    if g.m > args.max_edges:
        print(f"error: graph has {g.m} edges, above --max-edges {args.max_edges}", file=sys.stderr)
        return EXIT_INFEASIBLE
    rep = truss_vs_core(g, decompose_improved(g))
    sys.stdout.write(rep.dumps(args.style))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        g = generate_graph(args.kind, *args.params, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = dumps_graph(g, args.format)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trussdecomp", description="Truss decomposition of undirected graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="label every edge with its truss number")
    d.add_argument("graph")
    d.add_argument("--format", choices=FORMATS, default="edge-list")
    d.add_argument("--algo", choices=ALGOS, default="inmem")
    d.add_argument("--memory", type=int, default=None, help="budget M in vertex+edge units (default: |G|)")
    d.add_argument("--block", type=int, default=1, help="block size B in records")
    d.add_argument("--t", type=int, default=None, help="top-down: number of top classes")
    d.add_argument("--all", action="store_true", help="top-down: all classes")
    d.add_argument("--seed", type=int, default=0, help="recorded in the manifest; the algorithms are deterministic")
    d.add_argument("--out", default=os.environ.get(OUT_ENV, "trussdecomp-out"))
    d.add_argument("--no-kinit", action="store_true", help="top-down: skip the in-memory shortcut")
    d.add_argument("--oracle-limit", type=int, default=0, help="cross-check with the oracle when m <= this")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a labeling file against a graph")
    v.add_argument("graph")
    v.add_argument("labeling")
    v.add_argument("--format", choices=FORMATS, default="edge-list")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="compare the top truss with the top core")
    s.add_argument("graph")
    s.add_argument("--format", choices=FORMATS, default="edge-list")
    s.add_argument("--style", choices=("kv", "text"), default="kv")
    s.add_argument("--max-edges", type=int, default=2_000_000)
    s.set_defaults(func=cmd_stats)

    gn = sub.add_parser("gen", help="write a generated graph")
    gn.add_argument("kind", help="er, clique, power-law, path, star, hub or fig2")
    gn.add_argument("params", nargs="*")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--format", choices=FORMATS, default="edge-list")
    gn.add_argument("--out", default=None)
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetInfeasible as exc:
        print(f"error: budget infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
