from fractions import Fraction
from pathlib import Path

import pytest

from trapkit import decorated as dg
from trapkit import graph as gr
from trapkit.errors import BindingError, ValidationError
from trapkit.free_eval import CompletedTrap, eval_free_trap
from trapkit.kernel_trap import KernelTrap
from trapkit.sampling import random_graph, random_relabeling
from trapkit.tensor_trap import TensorTrap
from trapkit.textformat import (
    emit_element,
    emit_graph,
    materialize,
    parse_bindings,
    parse_graph,
    parse_graphs,
    tokenize,
)

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def test_worked_example_graph():
    g = parse_graph((DATA / "example.graph").read_text())
    assert gr.validate(g) == []
    assert g.arity == (3, 3) and g.loops == 2
    assert g.degrees() == {"x": (3, 1), "y": (1, 3)}
    assert g.input_at(3) == gr.IOEdge(3, 2)


def test_empty_block_is_the_empty_graph():
    assert parse_graph("graph g { inputs 0; outputs 0; }") == gr.unit(0)


def test_duplicate_input_index_names_the_line():
    text = "graph g {\n  vertex v;\n  in 1 -> v;\n  in 1 -> v;\n}"
    with pytest.raises(ValidationError) as err:
        parse_graph(text)
    assert "α not injective" in str(err.value)
    assert err.value.line == 4


def test_declared_counts_are_checked():
    with pytest.raises(ValidationError) as err:
        parse_graph("graph g { inputs 2; vertex v; in 1 -> v; }")
    assert "α not onto" in str(err.value)


@pytest.mark.parametrize(
    "text",
    [
        "graph g { vertex v; edge v -> w; }",
        "graph g { vertex v; frobnicate; }",
        "graph g { vertex v, v; }",
        "graph g { vertex v; edge v:1 -> v; }",
        "graph g { vertex v; decorate w = \"a\"; }",
        "graph g { vertex v; in x -> v; }",
        "graph g { vertex v; @ }",
        "graph g { vertex v;",
    ],
)
def test_syntax_and_semantic_errors(text):
    with pytest.raises(ValidationError):
        parse_graph(text)


def test_arrows_need_no_spaces():
    g = parse_graph("graph g { vertex a, b; edge a->b; }")
    assert len(g.edges) == 1
    assert [t.kind for t in tokenize("a->b")] == ["word", "arrow", "word"]


def test_named_blocks():
    text = "graph a { io 1 -> 1; }\ngraph b { loops 1; }"
    assert [n for n, _ in parse_graphs(text)] == ["a", "b"]
    assert parse_graph(text, "b") == gr.loop_graph()
    with pytest.raises(ValidationError):
        parse_graph(text, "c")


def test_round_trip_random_graphs(rng):
    for _ in range(500):
        g = random_graph(rng, max_vertices=5, max_edges=6)
        back = parse_graph(emit_graph(g))
        assert gr.is_isomorphic(back, g, ports=True)


def test_round_trip_keeps_string_names_and_decorations(rng):
    g = random_relabeling(rng, random_graph(rng, min_vertices=1))
    d = dg.PlanarGraph(g, tuple(f"k{n}" for n in range(len(g.vertices))))
    back = parse_graph(emit_graph(d))
    assert isinstance(back, dg.PlanarGraph)
    assert back.graph == g or back.is_isomorphic(d)
    assert back.decoration_map == d.decoration_map


def test_emit_unit_reparses():
    assert parse_graph(emit_graph(gr.unit(2))) == gr.unit(2)


def test_bindings_continue_across_lines():
    b = parse_bindings("bind A = tensor 1 1 2: 1 2\n   3 4\nbind B = tensor 0 0 2: 1/2  # half\n")
    assert b["A"].payload == [1, 2, 3, 4]
    assert b["B"].payload == [Fraction(1, 2)]


@pytest.mark.parametrize(
    "text",
    ["A = tensor 1 1 2: 1", "bind A = matrix 1 1 2: 1", "bind A = tensor 0 0 1: x", "bind A = tensor 0 0 1: 1\nbind A = tensor 0 0 1: 2"],
)
def test_bad_bindings(text):
    with pytest.raises(ValidationError):
        parse_bindings(text)


def test_materialize_checks_target():
    tensors = parse_bindings("bind A = tensor 1 1 2: 1 0 0 1")
    with pytest.raises(BindingError):
        materialize(tensors, TensorTrap(3))
    with pytest.raises(BindingError):
        materialize(tensors, KernelTrap(2))
    kernels = parse_bindings("bind K = kernel-expr 1 1 8: cos(x1 - y1)\nbind S = kernel 0 1 2: 1 2")
    with pytest.raises(BindingError):
        materialize(kernels, KernelTrap(8))  # S has N=2
    only_k = parse_bindings("bind K = kernel-expr 1 1 8: cos(x1 - y1)")
    assert materialize(only_k, KernelTrap(8))["K"].samples.shape == (8, 8)


def test_emit_scalars_and_tensors():
    T = TensorTrap(2)
    assert emit_element(T.partial_trace(T.unit1(), 1, 1)) == "scalar 2"
    assert emit_element(T.from_matrix([[1, 2], [3, 4]])) == "tensor 1 1 2:\n  1 2\n  3 4"
    assert emit_element(TensorTrap(2, exact=False).scalar(0.1)) == "scalar 0.1"
    assert emit_element(TensorTrap(2, exact=False).scalar(3.0)) == "scalar 3"


def test_emit_completed_loop():
    value = eval_free_trap(gr.loop_graph(), KernelTrap(8))
    assert emit_element(value) == "O^1 * scalar 1"


def test_emit_refuses_formal_deltas():
    C = CompletedTrap(KernelTrap(4))
    with pytest.raises(ValidationError):
        emit_element(C.unit1())
