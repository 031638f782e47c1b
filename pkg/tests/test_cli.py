import subprocess
import sys
from pathlib import Path

import pytest

from trussdecomp.cli import main
from trussdecomp.graph import dumps_graph, example_graph, read_graph_file
from trussdecomp.inmem import load_labeling

from conftest import EXAMPLE_CLASSES


@pytest.fixture
def fig2_file(tmp_path):
    p = tmp_path / "fig2.edges"
    assert main(["gen", "fig2", "--out", str(p)]) == 0
    return p


def read_class(path: Path) -> set:
    return {tuple(map(int, ln.split())) for ln in path.read_text().splitlines()}


def artifacts(out: Path) -> dict[str, bytes]:
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}


def test_gen_fixture(fig2_file):
    g, _ = read_graph_file(fig2_file)
    assert g == example_graph()


def test_gen_clique_and_determinism(tmp_path, capsys):
    assert main(["gen", "clique", "5"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 10
    a, b = tmp_path / "a", tmp_path / "b"
    main(["gen", "er", "100", "0.1", "--seed", "7", "--out", str(a)])
    main(["gen", "er", "100", "0.1", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert main(["gen", "er", "x"]) == 2


def test_decompose_inmem(fig2_file, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["decompose", "--algo", "inmem", str(fig2_file), "--out", str(out)]) == 0
    assert "k_max=5" in capsys.readouterr().out
    lab = load_labeling((out / "labeling.txt").read_text())
    assert lab.classes() == EXAMPLE_CLASSES
    for k, cls in EXAMPLE_CLASSES.items():
        assert read_class(out / f"phi_{k}.edges") == cls
    assert "probes=" in (out / "scan_report.txt").read_text()


def test_decompose_bottomup_small_memory(fig2_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["decompose", "--algo", "inmem", str(fig2_file), "--out", str(a)]) == 0
    assert main(["decompose", "--algo", "bottomup", "--memory", "20", str(fig2_file), "--out", str(b)]) == 0
    assert (a / "labeling.txt").read_bytes() == (b / "labeling.txt").read_bytes()
    report = (b / "scan_report.txt").read_text()
    assert "full_scan_equivalents=" in report and "M=20" in report
    assert (b / "work" / "g_new.current").exists() and (b / "work" / "input.edges").exists()


def test_decompose_topdown_t2(fig2_file, tmp_path):
    out = tmp_path / "td"
    assert main(["decompose", "--algo", "topdown", "--t", "2", str(fig2_file), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.glob("phi_*.edges")) == ["phi_4.edges", "phi_5.edges"]
    assert read_class(out / "phi_5.edges") == EXAMPLE_CLASSES[5]
    assert read_class(out / "phi_4.edges") == EXAMPLE_CLASSES[4]
    manifest = (out / "manifest.txt").read_text()
    assert "t=2\n" in manifest and "k_max=5\n" in manifest and "completed=false\n" in manifest


def test_topdown_all_and_missing_t(fig2_file, tmp_path, capsys):
    out = tmp_path / "all"
    assert main(["decompose", "--algo", "topdown", "--all", "--no-kinit", str(fig2_file), "--out", str(out)]) == 0
    assert load_labeling((out / "labeling.txt").read_text()).classes() == EXAMPLE_CLASSES
    assert main(["decompose", "--algo", "topdown", str(fig2_file), "--out", str(out)]) == 2
    assert "--t" in capsys.readouterr().err
    assert main(["decompose", "--algo", "inmem", "--t", "2", str(fig2_file), "--out", str(out)]) == 2


def test_decompose_errors(tmp_path, fig2_file, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("0 1\n1 two\n")
    assert main(["decompose", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["decompose", str(tmp_path / "missing.edges"), "--out", str(tmp_path / "o")]) == 2
    assert main(["decompose", "--algo", "bottomup", "--memory", "10", str(fig2_file), "--out", str(tmp_path / "o")]) == 3
    assert "vertex" in capsys.readouterr().err
    assert main(["decompose", "--algo", "bottomup", "--memory", "3", "--block", "2", str(fig2_file), "--out", str(tmp_path / "o")]) == 2


@pytest.mark.parametrize("algo", ["inmem-baseline", "inmem", "bottomup", "topdown"])
def test_determinism(fig2_file, tmp_path, algo):
    extra = ["--t", "3"] if algo == "topdown" else []
    runs = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        argv = ["decompose", "--algo", algo, "--memory", "24", *extra, str(fig2_file), "--out", str(out)]
        assert main(argv) == 0
        runs.append(artifacts(out))
    assert runs[0] == runs[1]
    assert "manifest.txt" in runs[0] and "scan_report.txt" in runs[0]


def test_oracle_cross_check(fig2_file, tmp_path):
    out = tmp_path / "o"
    assert main(["decompose", "--algo", "bottomup", "--oracle-limit", "300", str(fig2_file), "--out", str(out)]) == 0
    assert "oracle=match\n" in (out / "manifest.txt").read_text()


def test_out_dir_from_environment(fig2_file, tmp_path, monkeypatch):
    target = tmp_path / "from-env"
    monkeypatch.setenv("TRUSSDECOMP_OUT", str(target))
    # the default is read when the parser is built
    assert main(["decompose", str(fig2_file)]) == 0
    assert (target / "labeling.txt").exists()


def test_verify_exit_codes(fig2_file, tmp_path, capsys):
    out = tmp_path / "o"
    main(["decompose", str(fig2_file), "--out", str(out)])
    good = out / "labeling.txt"
    assert main(["verify", str(fig2_file), str(good)]) == 0
    assert "ok=yes" in capsys.readouterr().out

    tampered = tmp_path / "tampered.txt"
    tampered.write_text(good.read_text().replace("8 10 2", "8 10 3").replace("# k_max=5\n", ""))
    assert main(["verify", str(fig2_file), str(tampered)]) == 1

    short = tmp_path / "short.txt"
    short.write_text("".join(good.read_text().splitlines(keepends=True)[:-1]))
    assert main(["verify", str(fig2_file), str(short)]) == 2

    garbage = tmp_path / "garbage.txt"
    garbage.write_text("0 1\n")
    assert main(["verify", str(fig2_file), str(garbage)]) == 2


def test_stats(fig2_file, tmp_path, capsys):
    assert main(["stats", str(fig2_file)]) == 0
    kv = dict(ln.split("=") for ln in capsys.readouterr().out.splitlines())
    assert kv["k_max"] == "5" and kv["kmax_truss_vertices"] == "5" and kv["kmax_truss_edges"] == "10"

    k6 = tmp_path / "k6.edges"
    main(["gen", "clique", "6", "--out", str(k6)])
    capsys.readouterr()
    assert main(["stats", str(k6)]) == 0
    kv = dict(ln.split("=") for ln in capsys.readouterr().out.splitlines())
    assert (kv["k_max"], kv["c_max"]) == ("6", "5")

    path = tmp_path / "path.edges"
    main(["gen", "path", "6", "--out", str(path)])
    capsys.readouterr()
    assert main(["stats", str(path), "--style", "text"]) == 0
    assert any(ln.split() == ["k_max", "2"] for ln in capsys.readouterr().out.splitlines())

    assert main(["stats", str(fig2_file), "--max-edges", "10"]) == 3


def test_module_entry_point(fig2_file, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "trussdecomp", "decompose", str(fig2_file), "--out", str(tmp_path / "m")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "k_max=5" in proc.stdout
