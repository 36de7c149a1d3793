"""Independent brute-force oracles.

Nothing here calls the library's trace, composition or canonicalisation
code; each oracle works straight from the graph's edge lists.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


# -- direct wiring contraction ---------------------------------------------


def contract(g, values, d):
    """Evaluate a graph whose vertices carry coefficient arrays.

    ``values[v]`` is indexed ``[out ports..., in ports...]``.  Every internal
    edge is summed over d values; each loop contributes a factor d.  The
    result is indexed ``[outputs..., inputs...]`` like the tensor target.
    """
    k, l = g.arity
    edges = list(g.edges)
    degree = g.degrees()
    out = np.empty((d,) * (l + k), dtype=object)
    for ext in itertools.product(range(d), repeat=l + k):
        outs, ins = ext[:l], ext[l:]
        if any(outs[e.output_index - 1] != ins[e.input_index - 1] for e in g.io):
            out[ext] = Fraction(0)
            continue
        total = Fraction(0)
        for inner in itertools.product(range(d), repeat=len(edges)):
            slots = {v: ([None] * degree[v][1], [None] * degree[v][0]) for v in g.vertices}
            for n, e in enumerate(edges):
                slots[e.source][0][e.source_port - 1] = inner[n]
                slots[e.target][1][e.target_port - 1] = inner[n]
            for e in g.inputs:
                slots[e.target][1][e.port - 1] = ins[e.index - 1]
            for f in g.outputs:
                slots[f.source][0][f.port - 1] = outs[f.index - 1]
            term = Fraction(1)
            for v in g.vertices:
                o, i = slots[v]
                term *= values[v][tuple(o + i)]
                if term == 0:
                    break
            total += term
        out[ext] = total * d**g.loops
    return out


# -- isomorphism by exhaustive relabelling ---------------------------------


def encode(g, order, ports=False, labels=None):
    pos = {v: n for n, v in enumerate(order)}

    def p(port):
        return port if ports else 0

    return (
        len(order),
        tuple(labels[v] for v in order) if labels else (),
        tuple(sorted((pos[e.source], pos[e.target], p(e.source_port), p(e.target_port)) for e in g.edges)),
        tuple(sorted((e.index, pos[e.target], p(e.port)) for e in g.inputs)),
        tuple(sorted((pos[e.source], e.index, p(e.port)) for e in g.outputs)),
        tuple(sorted((e.input_index, e.output_index) for e in g.io)),
        g.loops,
    )


def brute_canonical(g, ports=False, labels=None):
    """The least encoding over all vertex orders: a complete invariant."""
    return min(encode(g, order, ports, labels) for order in itertools.permutations(g.vertices))


def brute_isomorphic(g, h, ports=False):
    if len(g.vertices) != len(h.vertices):
        return False
    target = encode(h, h.vertices, ports)
    return any(encode(g, order, ports) == target for order in itertools.permutations(g.vertices))


# -- indecomposability, condition by condition ------------------------------


def _bipartitions(vertices):
    vs = list(vertices)
    for r in range(1, len(vs)):
        for top in itertools.combinations(vs, r):
            yield set(top), set(vs) - set(top)


def splits_vertically(g):
    """G = G' o G'' with vertices on both sides: some nonempty proper top
    set receives edges from below but sends none down."""
    for top, bottom in _bipartitions(g.vertices):
        if not any(e.source in top and e.target in bottom for e in g.edges):
            return True
    return False


def splits_horizontally(g):
    """sigma . (G' * G'') . tau with vertices on both sides: no edge at all
    between the two vertex sets (indices can always be permuted apart)."""
    for a, b in _bipartitions(g.vertices):
        if not any((e.source in a) != (e.target in a) for e in g.edges):
            return True
    return False


def five_conditions(g):
    """Indecomposability checked literally, the lone loop counted as the
    one special indecomposable graph."""
    if not g.vertices and not g.edges and not g.inputs and not g.outputs and not g.io and g.loops == 1:
        return True
    return (
        bool(g.vertices)
        and not g.io
        and g.loops == 0
        and not splits_vertically(g)
        and not splits_horizontally(g)
    )


def vertical_witness(g, top):
    """Build G' (on ``top``) and G'' explicitly so that G = G' o G''.

    Every edge crossing the cut, every input feeding the top part and every
    io edge becomes a wire through the bottom graph.
    """
    from trapkit.graph import Edge, Graph, InputEdge, IOEdge, OutputEdge

    bottom = [v for v in g.vertices if v not in top]
    crossing = []  # (tail, head) for wires between the two layers
    for e in g.edges:
        if e.source not in top and e.target in top:
            crossing.append((("v", e.source, e.source_port), ("v", e.target, e.target_port)))
    for e in g.inputs:
        if e.target in top:
            crossing.append((("in", e.index), ("v", e.target, e.port)))
    for f in g.outputs:
        if f.source not in top:
            crossing.append((("v", f.source, f.port), ("out", f.index)))
    for e in g.io:
        crossing.append((("in", e.input_index), ("out", e.output_index)))

    b_in, b_out, b_io, t_in, t_out, t_io = [], [], [], [], [], []
    for m, (tail, head) in enumerate(crossing, 1):
        if tail[0] == "in":
            b_io.append(IOEdge(tail[1], m))
        else:
            b_out.append(OutputEdge(tail[1], m, tail[2]))
        if head[0] == "out":
            t_io.append(IOEdge(m, head[1]))
        else:
            t_in.append(InputEdge(m, head[1], head[2]))
    b_in = [e for e in g.inputs if e.target not in top]
    t_out = [f for f in g.outputs if f.source in top]
    upper = Graph(
        tuple(v for v in g.vertices if v in top),
        tuple(e for e in g.edges if e.source in top and e.target in top),
        tuple(t_in), tuple(t_out), tuple(t_io), g.loops,
    )
    lower = Graph(
        tuple(bottom),
        tuple(Edge(e.source, e.target, e.source_port, e.target_port) for e in g.edges
              if e.source not in top and e.target not in top),
        tuple(b_in), tuple(b_out), tuple(b_io), 0,
    )
    return upper, lower


# -- exhaustive small families ------------------------------------------------


def edge_multisets(n, max_edges=None, max_per_pair=None):
    """Every multiset of internal edges on vertices 0..n-1 as a tuple of
    (source, target) pairs, bounded in total or per ordered pair."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    if max_per_pair is not None:
        for counts in itertools.product(range(max_per_pair + 1), repeat=len(pairs)):
            if max_edges is None or sum(counts) <= max_edges:
                yield tuple(p for p, c in zip(pairs, counts) for _ in range(c))
        return
    for size in range(max_edges + 1):
        yield from itertools.combinations_with_replacement(pairs, size)
