import io
import subprocess
import sys
from pathlib import Path

import pytest

from trapkit import cli
from trapkit.errors import PartialTraceUndefined
from trapkit.tensor_trap import TensorTrap, matrix_product

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
LADDER = str(DATA / "ladder.graph")


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_eval_ladder_prints_matrix_product(capsys):
    code, out, _ = run(capsys, "eval", LADDER, "--target", "tensor", "--dim", 2, "--bindings", DATA / "ladder.bind")
    assert code == 0
    T = TensorTrap(2)
    a, b = T.from_matrix([[1, 2], [3, 4]]), T.from_matrix([[0, 1], [1, 0]])
    rows = [" ".join(str(v) for v in row) for row in matrix_product(a, b).data]
    assert out.split("\n")[0] == "tensor 1 1 2:"
    assert [line.strip() for line in out.strip().split("\n")[1:]] == rows


def test_eval_naive_strategy_agrees(capsys):
    args = ("eval", LADDER, "--bindings", DATA / "ladder.bind")
    assert run(capsys, *args)[1] == run(capsys, *args, "--strategy", "naive")[1]


def test_eval_on_graph_target(capsys):
    code, out, _ = run(capsys, "eval", LADDER, "--target", "graph")
    assert code == 0 and out.startswith("graph")


def test_eval_kernel_target(capsys, files):
    graph = files("loop.graph", "graph g { vertex v; edge v -> v; decorate v = \"K\"; }")
    bind = files("k.bind", "bind K = kernel-expr 1 1 16: cos(x1 - y1)")
    code, out, _ = run(capsys, "eval", graph, "--target", "kernel", "--grid", 16, "--bindings", bind)
    assert code == 0
    assert out.startswith("O^0 * scalar 6.28318530717958")


def test_eval_needs_bindings(capsys):
    assert run(capsys, "eval", LADDER)[0] == 2


def test_check_axioms_seeded(capsys):
    code, out, _ = run(capsys, "check-axioms", "--target", "tensor", "--trials", 200, "--seed", 7)
    assert code == 0
    assert "all axioms hold" in out
    assert out == run(capsys, "check-axioms", "--target", "tensor", "--trials", 200, "--seed", 7)[1]


def test_check_axioms_other_targets(capsys):
    assert run(capsys, "check-axioms", "--target", "graph", "--trials", 5)[0] == 0
    assert run(capsys, "check-axioms", "--target", "kernel", "--grid", 8, "--trials", 3)[0] == 0


def test_iso_and_relabeling(capsys, files):
    a = files("a.graph", "graph a { vertex p, q; edge p -> q; in 1 -> p; out q -> 1; }")
    b = files("b.graph", "graph b { vertex s, r; edge r -> s; in 1 -> r; out s -> 1; }")
    c = files("c.graph", "graph c { vertex s, r; edge s -> r; edge r -> s; in 1 -> r; out s -> 1; }")
    assert run(capsys, "iso", a, b) == (0, "isomorphic\n", "")
    assert run(capsys, "iso", a, c)[:2] == (1, "not isomorphic\n")


def test_canon_is_name_independent(capsys, files):
    a = files("a.graph", "graph a { vertex p, q; edge p -> q; in 1 -> p; out q -> 1; }")
    b = files("b.graph", "graph b { vertex s, r; edge r -> s; in 1 -> r; out s -> 1; }")
    assert run(capsys, "canon", a)[1] == run(capsys, "canon", b)[1]
    assert "graph canonical" in run(capsys, "canon", a, "--show", "--ports")[1]


def test_graph_operations(capsys):
    code, out, _ = run(capsys, "hconcat", LADDER, LADDER)
    assert code == 0 and "inputs 2; outputs 2;" in out
    assert "inputs 1; outputs 1;" in run(capsys, "vconcat", LADDER, LADDER)[1]
    assert "inputs 0; outputs 0;" in run(capsys, "trace", LADDER, 1, 1)[1]
    assert "inputs 0; outputs 0;" in run(capsys, "fulltrace", LADDER)[1]
    assert run(capsys, "act", LADDER, "--left", "1", "--right", "1")[0] == 0


def test_decomposition_commands(capsys):
    code, out, _ = run(capsys, "decompose", LADDER)
    assert code == 0 and "graph part1" in out and "graph remainder" in out
    assert run(capsys, "indecomposable", LADDER)[1] == "decomposable\n"
    assert run(capsys, "cycles", str(DATA / "example.graph"))[1] == "has_cycle yes\nloops 2\ncycle_free no\n"


def test_named_block_and_stdin(capsys, monkeypatch, files):
    path = files("two.graph", "graph a { io 1 -> 1; }\ngraph b { loops 1; }")
    assert run(capsys, "indecomposable", f"{path}:b")[1] == "indecomposable\n"
    monkeypatch.setattr(sys, "stdin", io.StringIO("graph s { loops 1; }"))
    assert run(capsys, "cycles", "-")[1].startswith("has_cycle no")


def test_exit_codes(capsys, files, monkeypatch):
    bad = files("bad.graph", "graph g {\n vertex v;\n in 1 -> v;\n in 1 -> v;\n}")
    code, _, err = run(capsys, "canon", bad)
    assert code == 2 and "α not injective" in err and "line 4" in err
    assert run(capsys, "canon", "/nonexistent/file.graph")[0] == 2
    assert run(capsys, "trace", LADDER, 2, 1)[0] == 4
    assert run(capsys, "act", LADDER, "--left", "2 1")[0] == 4
    wide = files("wide.graph", "graph w { vertex v; in 1 -> v; in 2 -> v; }")
    assert run(capsys, "vconcat", LADDER, wide)[0] == 4

    def undefined(args):
        raise PartialTraceUndefined("closed delta")

    monkeypatch.setattr(cli, "cmd_fulltrace", undefined)
    assert run(capsys, "fulltrace", LADDER)[0] == 3


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "trapkit", "indecomposable", LADDER],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0 and result.stdout == "decomposable\n"
