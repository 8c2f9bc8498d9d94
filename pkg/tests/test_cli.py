import io
import json
import subprocess
import sys

import pytest

from dichroma.cli import cli_dispatch
from dichroma.digraph import Digraph
from dichroma.errors import InternalError
from dichroma.formats import serialize_digraph

from helpers import cycle, path


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_dispatch([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, D):
        p = tmp_path / name
        p.write_text(serialize_digraph(D))
        return p
    return write


def test_colour_c5(files, tmp_path):
    c5 = files("c5.dgr", Digraph(5, cycle(5)))
    out_file = tmp_path / "c5.col"
    code, out, _ = run(["colour", c5, "--out", out_file])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("colours=")
    assert int(lines[0].split("=")[1]) <= 402
    assert lines[1] == "mode=outer"
    assert lines[2] == "implemented_bound=402 held=yes"
    assert lines[3] == "stated_bound=382 held=yes"
    code, out, _ = run(["verify", c5, out_file])
    assert code == 0 and out.startswith("valid colours=")


def test_colour_inner_bounds(files):
    c5 = files("c5.dgr", Digraph(5, cycle(5)))
    code, out, _ = run(["colour", c5, "--inner"])
    assert code == 0
    assert "implemented_bound=154 held=yes" in out
    assert "stated_bound=144 held=yes" in out


def test_colour_reports_witness(files):
    p6 = files("p6.dgr", Digraph(6, path(6)))
    code, out, _ = run(["colour", p6])
    assert code == 1 and out == "witness p6 1 2 3 4 5 6\n"
    code, out, _ = run(["colour", p6, "--trust-class"])
    assert code == 0 and out.startswith("colours=1")


def test_verify_invalid(files, tmp_path):
    c3 = files("c3.dgr", Digraph(3, cycle(3)))
    col = tmp_path / "mono.col"
    col.write_text("s dicol 3 1\nv 1 0\nv 2 0\nv 3 0\n")
    code, out, _ = run(["verify", c3, col])
    assert code == 1
    assert out.startswith("invalid colour=0 cycle ")
    assert sorted(out.split()[3:]) == ["1", "2", "3"]


def test_detect(files):
    digon = files("digon.dgr", Digraph(2, [(0, 1), (1, 0)]))
    assert run(["detect", digon, "--pattern", "digon"])[:2] == (1, "digon 1 2\n")
    c5 = files("c5.dgr", Digraph(5, cycle(5)))
    assert run(["detect", c5, "--pattern", "triangle"])[:2] == (0, "absent\n")
    code, out, _ = run(["detect", c5, "--pattern", "oddcycle"])
    assert code == 1 and out == "oddcycle 1 2 3 4 5\n"


def test_exact(files, tmp_path):
    c3 = files("c3.dgr", Digraph(3, cycle(3)))
    out_file = tmp_path / "c3.col"
    code, out, _ = run(["exact", c3, "--out", out_file])
    assert code == 0
    assert out.splitlines()[0] == "chi=2"
    assert out.splitlines()[1].startswith("nodes=")
    assert run(["verify", c3, out_file])[:2] == (0, "valid colours=2\n")
    assert run(["exact", c3, "--kmax", "1"])[:2] == (1, "chi>1\n")


def test_gen_is_deterministic(tmp_path, monkeypatch):
    argv = ["gen", "--kind", "in_class_p6_trianglefree", "--n", "30", "--p", "0.2", "--seed", "3"]
    first = run(argv)
    assert first[0] == 0 and first[1].startswith("p dgr 30 ")
    assert run(argv) == first
    monkeypatch.setenv("DICHROMA_SEED", "3")
    assert run(argv[:-2]) == first
    target = tmp_path / "g.dgr"
    assert run(argv + ["--out", target])[0] == 0
    assert target.read_text() == first[1]


def test_usage_errors(files, tmp_path):
    assert run([])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["detect", "x.dgr", "--pattern", "k5"])[0] == 2
    assert run(["colour", tmp_path / "missing.dgr"])[0] == 2
    assert run(["gen", "--kind", "random_oriented", "--n", "3", "--p", "2"])[0] == 2
    bad = tmp_path / "bad.dgr"
    bad.write_text("p dgr 3 1\na 4 1\n")
    code, _, err = run(["colour", bad])
    assert code == 2 and "line 2" in err


def test_help_exits_cleanly():
    assert run(["--help"])[0] == 0


def test_internal_error_exit_code(files, monkeypatch):
    import dichroma.cli as cli

    def boom(*args, **kwargs):
        raise InternalError("synthetic", {"where": "test"})

    monkeypatch.setattr(cli, "colour_class_member", boom)
    c5 = files("c5.dgr", Digraph(5, cycle(5)))
    code, _, err = run(["colour", c5])
    assert code == 3
    assert "internal error: synthetic" in err
    assert json.loads(err.split("\n", 1)[1]) == {"where": "test"}


def test_selftest_quick_with_figures(tmp_path):
    report = tmp_path / "report.tsv"
    figs = tmp_path / "figs"
    code, out, _ = run(["selftest", "--level", "quick", "--report", report, "--figures", figs])
    assert code == 0
    assert report.read_text() == out
    assert out.splitlines()[-1].startswith("summary\tPASS")
    assert sorted(p.name for p in figs.iterdir()) == [
        "colour_histogram.png", "colours_vs_size.png", "pipeline_runs.tsv"]


def test_module_entry_point(files):
    c3 = files("c3.dgr", Digraph(3, cycle(3)))
    proc = subprocess.run([sys.executable, "-m", "dichroma", "exact", str(c3)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("chi=2\n")
