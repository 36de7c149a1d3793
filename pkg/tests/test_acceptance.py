"""The ten acceptance criteria, one marked group each.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the report for one PASS/FAIL line per criterion.
"""

import itertools
import math

import numpy as np
import pytest

from helpers import SYM, oracle_values, random_nested, tensor_decorated
from oracles import brute_canonical, contract, edge_multisets, five_conditions
from trapkit import decorated as dg
from trapkit import graph as gr
from trapkit.analysis import is_indecomposable, minimal_decomposition
from trapkit.canon import canonical_form
from trapkit.decorated import DecoratedGraph
from trapkit.errors import PartialTraceUndefined
from trapkit.free_eval import (
    ALL_TRAP_AXIOMS,
    REDUCED_AXIOMS,
    CompletedTrap,
    GraphTrap,
    check_prop_axioms,
    check_trap_axioms,
    derived_compose,
    eval_cut,
    eval_free_trap,
    generalized_trace,
)
from trapkit.graph import Edge, Graph
from trapkit.kernel_trap import KernelTrap, generalized_convolution
from trapkit.perm import Permutation
from trapkit.sampling import random_graph, random_graph_of_arity, random_perm
from trapkit.tensor_trap import TensorTrap, matrix_product
from trapkit.wired import FiniteSupportTrap


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def graph_sampler(max_vertices):
    def sample(rng, k, l):
        return random_graph_of_arity(rng, k, l, max_vertices=max_vertices, max_edges=max_vertices)

    return sample


def assert_clean(report, trials):
    assert report.ok, str(report)
    for name, (passed, failed, undefined) in report.counts.items():
        assert passed == trials and undefined == 0, f"{name}: {passed} passed, {undefined} undefined"


# -- 1 -------------------------------------------------------------------------------


@criterion(1, "ProP axioms on graphs up to isomorphism (200 samples, <= 5 vertices)")
def test_prop_axioms_on_graphs():
    report = check_prop_axioms(GraphTrap(), graph_sampler(5), trials=200, rng=101, max_arity=3)
    assert_clean(report, 200)


# -- 2 -------------------------------------------------------------------------------

TRAP_TARGETS = {
    "graphs": (lambda: GraphTrap(), lambda T: graph_sampler(4), 60, {"max_arity": 3}),
    "planar graphs": (lambda: GraphTrap(planar=True), lambda T: graph_sampler(4), 40, {"max_arity": 3}),
    "tensors d=2": (lambda: TensorTrap(2), lambda T: T.random, 40, {"max_arity": 3}),
    "tensors d=3": (lambda: TensorTrap(3), lambda T: T.random, 25, {"max_arity": 2}),
    "kernels N=32": (lambda: KernelTrap(32, tol=1e-9), lambda T: T.random, 15, {"max_arity": 2, "max_slots": 4}),
}


@criterion(2, "TraP axioms: reduced identities first, then the full set, on graphs, tensors and kernels")
@pytest.mark.parametrize("name", list(TRAP_TARGETS))
def test_trap_axioms(name):
    make, sampler, trials, kw = TRAP_TARGETS[name]
    T = make()
    reduced = check_trap_axioms(T, sampler(T), trials=trials, rng=202, axioms=REDUCED_AXIOMS, **kw)
    assert_clean(reduced, trials)
    full = check_trap_axioms(T, sampler(T), trials=trials, rng=203, axioms=ALL_TRAP_AXIOMS, **kw)
    assert_clean(full, trials)


# -- 3 and 4 ---------------------------------------------------------------------------

T2 = TensorTrap(2)


@pytest.fixture(scope="module")
def evaluation_samples():
    rng = np.random.default_rng(303)
    return [tensor_decorated(rng, T2, "g") + tensor_decorated(rng, T2, "h") for _ in range(100)]


@criterion(3, "evaluation is a trace morphism and independent of the cut edge (100 samples, exact)")
def test_evaluation_is_a_morphism(evaluation_samples):
    rng = np.random.default_rng(304)
    edges_checked = 0
    for g, bg, h, bh in evaluation_samples:
        value = eval_free_trap(g, T2, bg)
        assert T2.equal(eval_free_trap(dg.hconcat(g, h), T2, {**bg, **bh}),
                        T2.hconcat(value, eval_free_trap(h, T2, bh)))
        k, l = g.arity
        s, t = random_perm(rng, l), random_perm(rng, k)
        assert T2.equal(eval_free_trap(dg.group_act(s, g, t), T2, bg), T2.act(s, value, t))
        for i, j in itertools.product(range(1, k + 1), range(1, l + 1)):
            assert T2.equal(eval_free_trap(dg.partial_trace(g, i, j), T2, bg), T2.partial_trace(value, i, j))
        for n in range(len(g.graph.edges)):
            assert T2.equal(eval_cut(g, T2, bg, n), value)
            edges_checked += 1
    assert edges_checked > 100


@criterion(4, "evaluation equals the direct wiring-contraction oracle on the same samples")
@pytest.mark.parametrize("strategy", ["scheduled", "naive"])
def test_evaluation_matches_oracle(evaluation_samples, strategy):
    for g, bg, h, bh in evaluation_samples:
        for graph, bindings in ((g, bg), (h, bh)):
            value = eval_free_trap(graph, T2, bindings, strategy=strategy)
            assert (value.data == contract(graph.graph, oracle_values(graph, bindings), 2)).all()


# -- 5 ---------------------------------------------------------------------------------


@criterion(5, "derived composition: vconcat on graphs, matrix product on tensors, cyclic and multiplicative traces")
def test_derived_composition():
    rng = np.random.default_rng(505)
    graphs = GraphTrap(planar=True)
    for _ in range(100):
        k, m, l = (int(v) for v in rng.integers(0, 4, size=3))
        p, q = random_graph_of_arity(rng, k, m), random_graph_of_arity(rng, m, l)
        assert graphs.equal(derived_compose(graphs, q, p), gr.vconcat(q, p))
    for _ in range(100):
        a, b = T2.random(rng, 1, 1), T2.random(rng, 1, 1)
        assert T2.equal(derived_compose(T2, a, b), matrix_product(a, b))
    for _ in range(50):
        k, m, l = (int(v) for v in rng.integers(0, 3, size=3))
        p, q = T2.random(rng, k, m), T2.random(rng, m, l)
        product = q.matrix() @ p.matrix()
        assert (derived_compose(T2, q, p).matrix() == product).all()
    for _ in range(50):
        k, l = (int(v) for v in rng.integers(0, 3, size=2))
        p, q = T2.random(rng, k, l), T2.random(rng, l, k)
        assert generalized_trace(T2, derived_compose(T2, p, q)).scalar() == \
            generalized_trace(T2, derived_compose(T2, q, p)).scalar()
        a, b = T2.random(rng, k, k), T2.random(rng, l, l)
        assert generalized_trace(T2, T2.hconcat(a, b)).scalar() == \
            generalized_trace(T2, a).scalar() * generalized_trace(T2, b).scalar()


# -- 6 ---------------------------------------------------------------------------------


@criterion(6, "exact values: trace of the identity is the dimension, and the finite-support trace table")
def test_exact_values():
    for d in (2, 3, 5):
        T = TensorTrap(d)
        assert T.partial_trace(T.unit1(), 1, 1).scalar() == d
        assert T.partial_trace(T.identity_map(1), 1, 1).scalar() == d

    F = FiniteSupportTrap()
    C = CompletedTrap(F)

    def times(c, x):
        return F.hconcat(F.scalar(c), x)

    def kron(a, b):
        return int(a == b)

    for i, j, k, l in itertools.product(range(3), repeat=4):
        pair = F.hconcat(F.f(i, j), F.f(k, l))
        assert F.equal(F.partial_trace(pair, 1, 1), times(kron(i, j), F.f(k, l)))
        assert F.equal(F.partial_trace(pair, 2, 2), times(kron(k, l), F.f(i, j)))
        assert F.equal(F.partial_trace(pair, 1, 2), times(kron(i, l), F.f(k, j)))
        assert F.equal(F.partial_trace(pair, 2, 1), times(kron(j, k), F.f(i, l)))
    for i, j in itertools.product(range(3), repeat=2):
        pair = F.hconcat(F.f(i, j), F.identity_map())
        assert F.equal(F.partial_trace(pair, 1, 1), times(kron(i, j), F.identity_map()))
        assert F.equal(F.partial_trace(pair, 1, 2), F.f(i, j))
        assert F.equal(F.partial_trace(pair, 2, 1), F.f(i, j))
        with pytest.raises(PartialTraceUndefined):
            F.partial_trace(pair, 2, 2)
        closed = C.partial_trace(C.embed(pair), 2, 2)
        assert C.equal(closed, C.hconcat(C.embed(F.f(i, j)), C.loop()))
        assert closed.degrees == (1,)


# -- 7 ---------------------------------------------------------------------------------


@criterion(7, "minimal decomposition round trip, and indecomposability on the exhaustive small family")
def test_decomposition_round_trip():
    rng = np.random.default_rng(707)
    for _ in range(200):
        g = random_graph(rng, min_vertices=1, max_vertices=5, max_edges=6)
        d = minimal_decomposition(g)
        assert gr.is_isomorphic(d.recombine(), g, ports=True)
        assert d.parts and all(is_indecomposable(part) for part in d.parts)


@criterion(7, "minimal decomposition round trip, and indecomposability on the exhaustive small family")
def test_indecomposable_exhaustive():
    checked = 0
    for n in range(4):
        vertices = tuple(range(n))
        for pairs in edge_multisets(n, max_per_pair=3):
            g = Graph(vertices, tuple(Edge(a, b, 0, 0) for a, b in pairs))
            assert is_indecomposable(g) == five_conditions(g), pairs
            checked += 1
    assert checked == 1 + 4 + 4**4 + 4**9


# -- 8 ---------------------------------------------------------------------------------


@criterion(8, "monad laws for nested planar graphs, compared through normal forms (50 samples)")
def test_monad_laws():
    rng = np.random.default_rng(808)

    def normal(g):
        return dg.gamma_normal_form(g, SYM)

    for _ in range(50):
        g = random_nested(rng, 0)
        units = dg.map_decorations(g, lambda x: dg.monad_unit(x, module=SYM))
        assert normal(dg.monad_mult(units)) == normal(g)
        assert normal(dg.monad_mult(dg.monad_unit(g, arity=g.arity))) == normal(g)
        nested = random_nested(rng, 2)
        inner_first = dg.monad_mult(dg.map_decorations(nested, dg.monad_mult))
        outer_first = dg.monad_mult(dg.monad_mult(nested))
        assert normal(inner_first) == normal(outer_first)


# -- 9 ---------------------------------------------------------------------------------


def ladder(n):
    g = gr.corolla(1, 1)
    for _ in range(n - 1):
        g = gr.vconcat(gr.corolla(1, 1), g)
    return g


def cosine(K):
    return K.from_function(1, 1, lambda ys, xs: np.cos(xs[0] - ys[0]))


def sup(a, b):
    return float(np.max(np.abs(a - b)))


@criterion(9, "kernel quadrature: cosine ladder, cosine trace, grid refinement, ladder associativity")
def test_kernel_quadrature():
    K = KernelTrap(64)
    c = cosine(K)
    value = generalized_convolution(DecoratedGraph(ladder(2), ("c", "c")), 64, {"c": c})
    assert value.degrees == (0,)
    assert sup(value.term(0).samples, math.pi * c.samples) < 1e-12

    assert abs(float(K.partial_trace(c, 1, 1).samples) - 2 * math.pi) < 1e-12

    fine = KernelTrap(128)
    coarse_value = derived_compose(K, c, c).samples
    fine_value = derived_compose(fine, cosine(fine), cosine(fine)).samples[::2, ::2]
    assert sup(coarse_value, fine_value) < 1e-12

    rng = np.random.default_rng(909)
    a, b, d = (K.random(rng, 1, 1) for _ in range(3))
    left = derived_compose(K, derived_compose(K, a, b), d).samples
    right = derived_compose(K, a, derived_compose(K, b, d)).samples
    assert sup(left, right) < 1e-12
    three = generalized_convolution(DecoratedGraph(ladder(3), ("a", "b", "d")), 64, {"a": a, "b": b, "d": d})
    assert sup(three.term(0).samples, left) < 1e-12


# -- 10 --------------------------------------------------------------------------------


def with_externals(n, pairs):
    """Every way to attach at most two external edges (an input, an output
    or an io edge) to the given internal structure, with every numbering
    of the outputs."""
    vertices = tuple(range(n))
    items = [("io",)] + [("in", v) for v in vertices] + [("out", v) for v in vertices]
    for size in range(3):
        for seq in itertools.product(items, repeat=size):
            ins, outs, io, a, b = [], [], [], 0, 0
            for item in seq:
                if item[0] == "in":
                    a += 1
                    ins.append((a, item[1]))
                elif item[0] == "out":
                    b += 1
                    outs.append((item[1], b))
                else:
                    a, b = a + 1, b + 1
                    io.append((a, b))
            g = Graph.build(vertices, pairs, ins, outs, io)
            for word in itertools.permutations(range(1, b + 1)):
                yield gr.group_act(Permutation(word), g, Permutation.identity(a))


@criterion(10, "canonical form agrees with brute force on the exhaustive family (<= 4 vertices, <= 4 edges, <= 2 externals)")
def test_canonical_form_exhaustive():
    shapes = {}
    for n in range(5):
        for pairs in edge_multisets(n, max_edges=4):
            g = Graph(tuple(range(n)), tuple(Edge(a, b, 0, 0) for a, b in pairs))
            shapes.setdefault(brute_canonical(g), (n, pairs))
    family = [g for n, pairs in shapes.values() for g in with_externals(n, pairs)]
    lib = [canonical_form(g) for g in family]
    brute = [brute_canonical(g) for g in family]
    # the two invariants induce the same partition of the family
    classes = set(zip(lib, brute))
    assert len(classes) == len(set(lib)) == len(set(brute))
    for g in family[::50]:
        renamed = g.relabel({v: f"w{(3 * i) % 7}" for i, v in enumerate(g.vertices)})
        assert canonical_form(renamed) == canonical_form(g)
