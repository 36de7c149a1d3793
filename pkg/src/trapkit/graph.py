"""Oriented graphs with input, output and input-output edges and loops.

A graph carries vertices, internal edges, input edges (indexed on the way
in), output edges (indexed on the way out), input-output edges that cross
the graph without meeting a vertex, and a number of loops.  Input indices
of input and input-output edges together form a bijection onto [i(G)];
output indices likewise onto [o(G)].

Every edge end that touches a vertex also records a *port*: the position of
that edge among the incoming (or outgoing) edges of the vertex.  Ports are
ignored by plain isomorphism and respected by planar isomorphism; they ride
along through every operation, so planar structure survives gluing,
tracing and restriction for free.  When ports are not given they are
assigned by :meth:`Graph.build`.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, replace

from .errors import ArityError, ValidationError
from .perm import Permutation


@dataclass(frozen=True, order=True)
class Edge:
    source: object
    target: object
    source_port: int = 0
    target_port: int = 0


@dataclass(frozen=True, order=True)
class InputEdge:
    index: int
    target: object
    port: int = 0


@dataclass(frozen=True, order=True)
class OutputEdge:
    source: object
    index: int
    port: int = 0


@dataclass(frozen=True, order=True)
class IOEdge:
    input_index: int
    output_index: int


@dataclass(frozen=True)
class Graph:
    vertices: tuple = ()
    edges: tuple = ()
    inputs: tuple = ()
    outputs: tuple = ()
    io: tuple = ()
    loops: int = 0

    # -- construction -------------------------------------------------

    @classmethod
    def build(cls, vertices=(), edges=(), inputs=(), outputs=(), io=(), loops=0):
        """Build a graph from plain tuples, filling in missing ports.

        ``edges`` holds ``(source, target)`` or ``(source, target, sport,
        tport)``; ``inputs`` holds ``(index, target[, port])``; ``outputs``
        holds ``(source, index[, port])``; ``io`` holds ``(in, out)``.

        Default in-ports at a vertex go to its input edges in index order,
        then to internal edges in the order given.  Default out-ports go to
        internal edges in the order given, then to output edges in index
        order.  A corolla therefore gets ports equal to its indices.
        """
        vertices = tuple(vertices)
        edges = [tuple(e) for e in edges]
        inputs = [tuple(e) for e in inputs]
        outputs = [tuple(e) for e in outputs]
        next_in = Counter()
        next_out = Counter()
        taken_in = defaultdict(set)
        taken_out = defaultdict(set)
        for e in edges:
            if len(e) == 4:
                taken_out[e[0]].add(e[2])
                taken_in[e[1]].add(e[3])
        for e in inputs:
            if len(e) == 3:
                taken_in[e[1]].add(e[2])
        for e in outputs:
            if len(e) == 3:
                taken_out[e[0]].add(e[2])

        def fresh(counter, taken, v):
            counter[v] += 1
            while counter[v] in taken[v]:
                counter[v] += 1
            return counter[v]

        built_inputs = {}
        for pos, e in sorted(enumerate(inputs), key=lambda pe: pe[1][0]):
            port = e[2] if len(e) == 3 else fresh(next_in, taken_in, e[1])
            built_inputs[pos] = InputEdge(e[0], e[1], port)
        built_edges = []
        for e in edges:
            if len(e) == 4:
                built_edges.append(Edge(*e))
            else:
                sp = fresh(next_out, taken_out, e[0])
                built_edges.append(Edge(e[0], e[1], sp, 0))
        for pos, e in enumerate(edges):
            if len(e) != 4:
                built_edges[pos] = replace(built_edges[pos], target_port=fresh(next_in, taken_in, e[1]))
        built_outputs = {}
        for pos, e in sorted(enumerate(outputs), key=lambda pe: pe[1][1]):
            port = e[2] if len(e) == 3 else fresh(next_out, taken_out, e[0])
            built_outputs[pos] = OutputEdge(e[0], e[1], port)
        return cls(
            vertices=vertices,
            edges=tuple(built_edges),
            inputs=tuple(built_inputs[p] for p in range(len(inputs))),
            outputs=tuple(built_outputs[p] for p in range(len(outputs))),
            io=tuple(IOEdge(*e) for e in io),
            loops=int(loops),
        )

    # -- counts -------------------------------------------------------

    @property
    def n_inputs(self) -> int:
        return len(self.inputs) + len(self.io)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs) + len(self.io)

    @property
    def arity(self) -> tuple:
        return (self.n_inputs, self.n_outputs)

    def in_degree(self, v) -> int:
        return sum(e.target == v for e in self.edges) + sum(e.target == v for e in self.inputs)

    def out_degree(self, v) -> int:
        return sum(e.source == v for e in self.edges) + sum(e.source == v for e in self.outputs)

    def degrees(self) -> dict:
        """``{v: (i(v), o(v))}`` for every vertex."""
        ins = Counter(e.target for e in self.edges) + Counter(e.target for e in self.inputs)
        outs = Counter(e.source for e in self.edges) + Counter(e.source for e in self.outputs)
        return {v: (ins[v], outs[v]) for v in self.vertices}

    def input_at(self, index: int):
        """The input or io edge carrying input index ``index``."""
        for e in self.inputs:
            if e.index == index:
                return e
        for e in self.io:
            if e.input_index == index:
                return e
        raise IndexError(f"no input with index {index}")

    def output_at(self, index: int):
        for e in self.outputs:
            if e.index == index:
                return e
        for e in self.io:
            if e.output_index == index:
                return e
        raise IndexError(f"no output with index {index}")

    def relabel(self, mapping) -> "Graph":
        """Rename vertices through ``mapping`` (dict or callable)."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Graph(
            vertices=tuple(f(v) for v in self.vertices),
            edges=tuple(Edge(f(e.source), f(e.target), e.source_port, e.target_port) for e in self.edges),
            inputs=tuple(InputEdge(e.index, f(e.target), e.port) for e in self.inputs),
            outputs=tuple(OutputEdge(f(e.source), e.index, e.port) for e in self.outputs),
            io=self.io,
            loops=self.loops,
        )

    def with_positional_ids(self, offset: int = 0) -> "Graph":
        """Rename the vertices ``offset, offset+1, ...`` in their stored order."""
        pos = {v: offset + i for i, v in enumerate(self.vertices)}
        return self.relabel(pos)

    def __repr__(self):
        return (
            f"Graph(i={self.n_inputs}, o={self.n_outputs}, V={list(self.vertices)}, "
            f"E={[(e.source, e.target) for e in self.edges]}, "
            f"I={[(e.index, e.target) for e in self.inputs]}, "
            f"O={[(e.source, e.index) for e in self.outputs]}, "
            f"IO={[(e.input_index, e.output_index) for e in self.io]}, L={self.loops})"
        )


# -- validation ---------------------------------------------------------


def _bijection_violations(indices, size, name):
    found = []
    counts = Counter(indices)
    if any(c > 1 for c in counts.values()):
        found.append(f"{name} not injective")
    if set(indices) != set(range(1, size + 1)):
        found.append(f"{name} not onto [1..{size}]")
    return found


def validate(g: Graph) -> list:
    """Return the list of violated invariants (empty when ``g`` is valid)."""
    found = []
    vset = set(g.vertices)
    if len(vset) != len(g.vertices):
        found.append("vertex ids not distinct")
    for e in g.edges:
        if e.source not in vset:
            found.append(f"edge source {e.source!r} is not a vertex")
        if e.target not in vset:
            found.append(f"edge target {e.target!r} is not a vertex")
    for e in g.inputs:
        if e.target not in vset:
            found.append(f"input {e.index} targets unknown vertex {e.target!r}")
    for e in g.outputs:
        if e.source not in vset:
            found.append(f"output {e.index} leaves unknown vertex {e.source!r}")
    found += _bijection_violations(
        [e.index for e in g.inputs] + [e.input_index for e in g.io], g.n_inputs, "α"
    )
    found += _bijection_violations(
        [e.index for e in g.outputs] + [e.output_index for e in g.io], g.n_outputs, "β"
    )
    if g.loops < 0:
        found.append("negative loop count")
    in_ports = defaultdict(list)
    out_ports = defaultdict(list)
    for e in g.edges:
        out_ports[e.source].append(e.source_port)
        in_ports[e.target].append(e.target_port)
    for e in g.inputs:
        in_ports[e.target].append(e.port)
    for e in g.outputs:
        out_ports[e.source].append(e.port)
    for v in g.vertices:
        if sorted(in_ports[v]) != list(range(1, len(in_ports[v]) + 1)):
            found.append(f"in-ports of {v!r} are not an order on its incoming edges")
        if sorted(out_ports[v]) != list(range(1, len(out_ports[v]) + 1)):
            found.append(f"out-ports of {v!r} are not an order on its outgoing edges")
    return found


def check_valid(g: Graph) -> Graph:
    problems = validate(g)
    if problems:
        raise ValidationError("; ".join(problems), problems)
    return g


# -- units and generators -------------------------------------------------


def unit(n: int = 1) -> Graph:
    """``I_n``: n input-output edges, index i to index i."""
    return Graph(io=tuple(IOEdge(i, i) for i in range(1, n + 1)))


def empty() -> Graph:
    return Graph()


def loop_graph() -> Graph:
    return Graph(loops=1)


def corolla(k: int, l: int) -> Graph:
    """One vertex, inputs 1..k and outputs 1..l, ports equal to indices."""
    return Graph(
        vertices=(0,),
        inputs=tuple(InputEdge(i, 0, i) for i in range(1, k + 1)),
        outputs=tuple(OutputEdge(0, j, j) for j in range(1, l + 1)),
    )


# -- ProP structure ---------------------------------------------------------


def hconcat(g: Graph, h: Graph) -> Graph:
    """Juxtapose ``g`` and ``h``; ``h``'s indices shift by i(g) and o(g)."""
    g = g.with_positional_ids()
    h = h.with_positional_ids(len(g.vertices))
    di, do = g.n_inputs, g.n_outputs
    return Graph(
        vertices=g.vertices + h.vertices,
        edges=g.edges + h.edges,
        inputs=g.inputs + tuple(InputEdge(e.index + di, e.target, e.port) for e in h.inputs),
        outputs=g.outputs + tuple(OutputEdge(e.source, e.index + do, e.port) for e in h.outputs),
        io=g.io + tuple(IOEdge(e.input_index + di, e.output_index + do) for e in h.io),
        loops=g.loops + h.loops,
    )


def vconcat(top: Graph, bottom: Graph) -> Graph:
    """Glue output j of ``bottom`` to input j of ``top`` for every j."""
    if bottom.n_outputs != top.n_inputs:
        raise ArityError(
            f"cannot compose: o(bottom)={bottom.n_outputs} but i(top)={top.n_inputs}"
        )
    top = top.with_positional_ids()
    bottom = bottom.with_positional_ids(len(top.vertices))
    below = {e.index: e for e in bottom.outputs} | {e.output_index: e for e in bottom.io}
    above = {e.index: e for e in top.inputs} | {e.input_index: e for e in top.io}
    edges, inputs, outputs, io = [], [], [], []
    for m in range(1, bottom.n_outputs + 1):
        a, b = below[m], above[m]
        if isinstance(a, OutputEdge) and isinstance(b, InputEdge):
            edges.append(Edge(a.source, b.target, a.port, b.port))
        elif isinstance(a, OutputEdge):
            outputs.append(OutputEdge(a.source, b.output_index, a.port))
        elif isinstance(b, InputEdge):
            inputs.append(InputEdge(a.input_index, b.target, b.port))
        else:
            io.append(IOEdge(a.input_index, b.output_index))
    return Graph(
        vertices=top.vertices + bottom.vertices,
        edges=top.edges + bottom.edges + tuple(edges),
        inputs=bottom.inputs + tuple(inputs),
        outputs=top.outputs + tuple(outputs),
        io=tuple(sorted(io)),
        loops=top.loops + bottom.loops,
    )


def group_act(sigma: Permutation, g: Graph, tau: Permutation) -> Graph:
    """``sigma . g . tau``: output index b becomes sigma(b), input index a
    becomes tau^{-1}(a)."""
    if sigma.n != g.n_outputs or tau.n != g.n_inputs:
        raise ArityError(
            f"acting with S_{sigma.n} x S_{tau.n} on a graph of arity ({g.n_inputs},{g.n_outputs})"
        )
    ti = tau.inverse
    return Graph(
        vertices=g.vertices,
        edges=g.edges,
        inputs=tuple(InputEdge(ti(e.index), e.target, e.port) for e in g.inputs),
        outputs=tuple(OutputEdge(e.source, sigma(e.index), e.port) for e in g.outputs),
        io=tuple(IOEdge(ti(e.input_index), sigma(e.output_index)) for e in g.io),
        loops=g.loops,
    )


def hconcat_all(graphs) -> Graph:
    out = empty()
    for g in graphs:
        out = hconcat(out, g)
    return out


# -- isomorphism --------------------------------------------------------------


def _vertex_profile(g: Graph, ports: bool):
    ins = defaultdict(list)
    outs = defaultdict(list)
    for e in g.inputs:
        ins[e.target].append((e.index, e.port) if ports else e.index)
    for e in g.outputs:
        outs[e.source].append((e.index, e.port) if ports else e.index)
    deg = g.degrees()
    return {v: (deg[v], tuple(sorted(ins[v])), tuple(sorted(outs[v]))) for v in g.vertices}


def _adjacency(g: Graph, ports: bool):
    adj = defaultdict(Counter)
    for e in g.edges:
        adj[(e.source, e.target)][(e.source_port, e.target_port) if ports else None] += 1
    return adj


def is_isomorphic(g: Graph, h: Graph, ports: bool = False, labels_g=None, labels_h=None) -> bool:
    """Decide whether a vertex bijection carries ``g`` onto ``h``.

    External indices are fixed by any isomorphism, so only vertices (and
    with them the internal edges) may move.  With ``ports=True`` the port
    numbers must match too; ``labels_*`` are optional per-vertex labels
    (decorations) that must be preserved.
    """
    if (
        g.arity != h.arity
        or len(g.vertices) != len(h.vertices)
        or len(g.edges) != len(h.edges)
        or g.loops != h.loops
        or sorted(g.io) != sorted(h.io)
    ):
        return False
    pg = _vertex_profile(g, ports)
    ph = _vertex_profile(h, ports)
    if labels_g is not None or labels_h is not None:
        labels_g = labels_g or {}
        labels_h = labels_h or {}
        pg = {v: (p, labels_g.get(v)) for v, p in pg.items()}
        ph = {v: (p, labels_h.get(v)) for v, p in ph.items()}
    if Counter(pg.values()) != Counter(ph.values()):
        return False
    ag = _adjacency(g, ports)
    ah = _adjacency(h, ports)
    empty_counter = Counter()
    by_profile = defaultdict(list)
    for v, p in ph.items():
        by_profile[p].append(v)
    candidates = {v: by_profile[pg[v]] for v in g.vertices}

    neighbours = defaultdict(set)
    for e in g.edges:
        neighbours[e.source].add(e.target)
        neighbours[e.target].add(e.source)
    order = []
    seen = set()
    for start in sorted(g.vertices, key=lambda v: (len(candidates[v]), g.vertices.index(v))):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop(0)
            order.append(v)
            for w in sorted(neighbours[v], key=lambda w: len(candidates[w])):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)

    mapping = {}
    used = set()

    def consistent(x, y):
        if ag.get((x, x), empty_counter) != ah.get((y, y), empty_counter):
            return False
        for w, z in mapping.items():
            if ag.get((x, w), empty_counter) != ah.get((y, z), empty_counter):
                return False
            if ag.get((w, x), empty_counter) != ah.get((z, y), empty_counter):
                return False
        return True

    def extend(pos):
        if pos == len(order):
            return True
        x = order[pos]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if extend(pos + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return extend(0)
