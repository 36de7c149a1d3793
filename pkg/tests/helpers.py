"""Samplers shared by several test modules."""

from fractions import Fraction

from trapkit import decorated as dg
from trapkit.decorated import DecoratedGraph
from trapkit.perm import identity
from trapkit.sampling import random_graph, random_graph_of_arity, random_perm
from trapkit.wired import FiniteSupportTrap


def tensor_decorated(rng, T, prefix="x", **kw):
    """A random graph whose vertex v is decorated ``prefix + v`` and bound
    to a random tensor of the right arity."""
    kw.setdefault("max_vertices", 4)
    kw.setdefault("max_inputs", 2)
    kw.setdefault("max_outputs", 2)
    G = random_graph(rng, **kw)
    degrees = G.degrees()
    keys = tuple(f"{prefix}{v}" for v in G.vertices)
    bindings = {key: T.random(rng, *degrees[v]) for key, v in zip(keys, G.vertices)}
    return DecoratedGraph(G, keys), bindings


def oracle_values(g, bindings):
    return {v: bindings[key].data for v, key in zip(g.graph.vertices, g.decorations)}


def finite_support_sample(T: FiniteSupportTrap):
    """Sampler for elements mixing identity wires with a small body."""

    def sample(rng, k, l):
        n_wires = int(rng.integers(0, min(k, l) + 1))
        ins = [int(a) + 1 for a in rng.permutation(k)[:n_wires]]
        outs = [int(b) + 1 for b in rng.permutation(l)[:n_wires]]
        free = (l - n_wires) + (k - n_wires)
        body = {}
        for _ in range(int(rng.integers(0, 3))):
            key = tuple(int(v) for v in rng.integers(0, 3, size=free))
            body[key] = body.get(key, 0) + Fraction(int(rng.integers(1, 4)))
        return T.make(k, l, list(zip(ins, outs)), body)

    return sample


# -- symbol-decorated and nested planar graphs --------------------------------

SYM = dg.SymbolModule()


def sym(name, k, l, sigma=None, tau=None):
    x = dg.Symbol(name, k, l)
    if sigma or tau:
        x = SYM.act(sigma or identity(l), x, tau or identity(k))
    return x


def symbol_decorated(g, rng=None):
    degrees = g.degrees()
    decs = []
    for n, v in enumerate(g.vertices):
        k, l = degrees[v]
        s = sym(f"s{n % 2}", k, l)
        if rng is not None:
            s = SYM.act(random_perm(rng, l), s, random_perm(rng, k))
        decs.append(s)
    return dg.PlanarGraph(g, tuple(decs))


def shuffled_ports(g, rng):
    degrees = g.graph.degrees()
    for v in g.graph.vertices:
        k, l = degrees[v]
        g = dg.vertex_act(random_perm(rng, l), v, g, random_perm(rng, k))
    return g


def random_nested(rng, depth, k=None, l=None):
    """A planar graph nested ``depth`` times; the innermost level carries symbols."""
    if k is None:
        G = random_graph(rng, max_vertices=3, max_edges=3, max_inputs=2, max_outputs=2)
    else:
        G = random_graph_of_arity(rng, k, l, max_vertices=2, max_edges=2)
    if depth == 0:
        return shuffled_ports(symbol_decorated(G, rng), rng)
    degrees = G.degrees()
    decs = tuple(random_nested(rng, depth - 1, *degrees[v]) for v in G.vertices)
    return shuffled_ports(dg.PlanarGraph(G, decs), rng)
