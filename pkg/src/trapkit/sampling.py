"""Seeded random graphs and permutations for property tests and the CLI.

Every function takes a ``numpy.random.Generator`` so that one seed fixes a
whole run.
"""

from __future__ import annotations

import numpy as np

from .graph import Edge, Graph, InputEdge, IOEdge, OutputEdge
from .perm import Permutation


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_graph(
    rng,
    max_vertices: int = 4,
    max_edges: int = 4,
    max_inputs: int = 3,
    max_outputs: int = 3,
    max_io: int = 1,
    max_loops: int = 1,
    min_vertices: int = 0,
    acyclic: bool = False,
    shuffle_ports: bool = True,
) -> Graph:
    """A random valid graph.

    Vertices are ``0..n-1``.  With ``acyclic`` every internal edge runs
    from a lower to a higher vertex and no loops are drawn.  Ports are a
    random order at each vertex unless ``shuffle_ports`` is false, in which
    case they follow the order edges were drawn.
    """
    n = int(rng.integers(min_vertices, max_vertices + 1))
    vertices = tuple(range(n))
    pairs = []
    if n:
        for _ in range(int(rng.integers(0, max_edges + 1))):
            a, b = (int(x) for x in rng.integers(0, n, size=2))
            if acyclic:
                if a == b:
                    continue
                a, b = min(a, b), max(a, b)
            pairs.append((a, b))
    n_in = int(rng.integers(0, max_inputs + 1)) if n else 0
    n_out = int(rng.integers(0, max_outputs + 1)) if n else 0
    n_io = int(rng.integers(0, max_io + 1))
    loops = 0 if acyclic else int(rng.integers(0, max_loops + 1))
    in_targets = [int(x) for x in rng.integers(0, n, size=n_in)] if n else []
    out_sources = [int(x) for x in rng.integers(0, n, size=n_out)] if n else []

    in_index = [int(x) + 1 for x in rng.permutation(n_in + n_io)]
    out_index = [int(x) + 1 for x in rng.permutation(n_out + n_io)]

    # Collect the edge ends at each vertex, then order them.
    in_ends = {v: [] for v in vertices}
    out_ends = {v: [] for v in vertices}
    for r, (a, b) in enumerate(pairs):
        out_ends[a].append(("e", r))
        in_ends[b].append(("e", r))
    for r, v in enumerate(in_targets):
        in_ends[v].append(("i", r))
    for r, v in enumerate(out_sources):
        out_ends[v].append(("o", r))
    in_port, out_port = {}, {}
    for v in vertices:
        for ends, table in ((in_ends[v], in_port), (out_ends[v], out_port)):
            order = rng.permutation(len(ends)) if shuffle_ports else range(len(ends))
            for p, r in enumerate(order, 1):
                table[ends[int(r)]] = p

    return Graph(
        vertices=vertices,
        edges=tuple(Edge(a, b, out_port[("e", r)], in_port[("e", r)]) for r, (a, b) in enumerate(pairs)),
        inputs=tuple(InputEdge(in_index[r], v, in_port[("i", r)]) for r, v in enumerate(in_targets)),
        outputs=tuple(OutputEdge(v, out_index[r], out_port[("o", r)]) for r, v in enumerate(out_sources)),
        io=tuple(IOEdge(in_index[n_in + r], out_index[n_out + r]) for r in range(n_io)),
        loops=loops,
    )


def random_graph_of_arity(rng, k: int, l: int, max_vertices: int = 3, max_edges: int = 3, **kw) -> Graph:
    """A random graph with exactly ``k`` inputs and ``l`` outputs."""
    kw.setdefault("max_io", min(k, l))
    while True:
        n_io = int(rng.integers(0, min(k, l, kw["max_io"]) + 1))
        g = random_graph(
            rng,
            max_vertices=max_vertices,
            max_edges=max_edges,
            max_inputs=0,
            max_outputs=0,
            max_io=0,
            min_vertices=1 if (k - n_io or l - n_io) else 0,
            **{key: v for key, v in kw.items() if key not in ("max_io",)},
        )
        if not g.vertices and (k - n_io or l - n_io):
            continue
        vs = g.vertices
        in_targets = [int(x) for x in rng.integers(0, len(vs), size=k - n_io)] if vs else []
        out_sources = [int(x) for x in rng.integers(0, len(vs), size=l - n_io)] if vs else []
        in_index = [int(x) + 1 for x in rng.permutation(k)]
        out_index = [int(x) + 1 for x in rng.permutation(l)]
        ins = Graph.build(
            vertices=vs,
            edges=[(e.source, e.target) for e in g.edges],
            inputs=[(in_index[r], v) for r, v in enumerate(in_targets)],
            outputs=[(v, out_index[r]) for r, v in enumerate(out_sources)],
            io=[(in_index[k - n_io + r], out_index[l - n_io + r]) for r in range(n_io)],
            loops=g.loops,
        )
        return ins


def random_perm(rng, n: int) -> Permutation:
    return Permutation(rng.permutation(n) + 1)


def random_relabeling(rng, g: Graph) -> Graph:
    """Rename vertices to shuffled strings and shuffle every stored list."""
    names = [f"v{int(x)}" for x in rng.permutation(len(g.vertices))]
    h = g.relabel(dict(zip(g.vertices, names)))

    def shuffled(items):
        items = list(items)
        return tuple(items[int(i)] for i in rng.permutation(len(items)))

    return Graph(
        vertices=shuffled(h.vertices),
        edges=shuffled(h.edges),
        inputs=shuffled(h.inputs),
        outputs=shuffled(h.outputs),
        io=shuffled(h.io),
        loops=h.loops,
    )
