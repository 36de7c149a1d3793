"""Decorated and planar graphs, their quotient normal form, and the monad.

A decorated graph attaches a value to each vertex; the value's arity must
be the vertex's (in-degree, out-degree).  A planar graph is a decorated
graph whose port numbers are meaningful: they order the incoming and the
outgoing edges of each vertex, and the port-th slot of the decoration is
the one wired to that edge.

Reordering the ports of a vertex while acting on its decoration with the
same permutations gives an equivalent planar graph.  Concretely, with
``vertex_act(sigma, v, g, tau)`` (out-port p becomes sigma(p), in-port p
becomes tau^{-1}(p)) the pair ``(vertex_act(sigma, v, g, tau),
sigma . x_v . tau)`` is equivalent to ``(g, x_v)``.  ``gamma_normal_form``
picks one representative per class.

Decorations whose values are themselves planar graphs can be flattened by
``monad_mult``; ``monad_unit`` wraps a value into a one-vertex graph.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from . import graph as gr
from .analysis import restrict as _restrict
from .canon import CanonicalForm, canonical_form, search_leaves
from .errors import ArityError, ValidationError
from .graph import Edge, Graph, InputEdge, IOEdge, OutputEdge
from .perm import Permutation
from .trace import partial_trace as _partial_trace


# -- decorated graphs -----------------------------------------------------


@dataclass(frozen=True)
class DecoratedGraph:
    """A graph plus one decoration per vertex (``decorations`` is aligned
    with ``graph.vertices``; ``None`` marks an undecorated vertex)."""

    graph: Graph
    decorations: tuple = ()

    planar = False

    def __post_init__(self):
        if not self.decorations and self.graph.vertices:
            object.__setattr__(self, "decorations", (None,) * len(self.graph.vertices))
        if len(self.decorations) != len(self.graph.vertices):
            raise ValidationError("one decoration per vertex is required")

    @classmethod
    def from_mapping(cls, graph: Graph, mapping) -> "DecoratedGraph":
        return cls(graph, tuple(mapping.get(v) for v in graph.vertices))

    @property
    def decoration_map(self) -> dict:
        return dict(zip(self.graph.vertices, self.decorations))

    def decoration(self, v):
        return self.decorations[self.graph.vertices.index(v)]

    @property
    def arity(self):
        return self.graph.arity

    @property
    def n_inputs(self):
        return self.graph.n_inputs

    @property
    def n_outputs(self):
        return self.graph.n_outputs

    def _same_kind(self, graph, decorations):
        return type(self)(graph, tuple(decorations))

    def relabel(self, mapping):
        return self._same_kind(self.graph.relabel(mapping), self.decorations)

    def labels(self, module=None) -> dict:
        """Per-vertex tokens used by isomorphism and canonical forms."""
        token = module.token if module is not None else _default_token
        return {v: token(x) for v, x in zip(self.graph.vertices, self.decorations)}

    def canonical_form(self, module=None) -> CanonicalForm:
        return canonical_form(self.graph, ports=self.planar, labels=self.labels(module))

    def is_isomorphic(self, other, module=None) -> bool:
        return gr.is_isomorphic(
            self.graph,
            other.graph,
            ports=self.planar,
            labels_g=self.labels(module),
            labels_h=other.labels(module),
        )

    def validate(self, module=None) -> list:
        found = gr.validate(self.graph)
        if module is None:
            return found
        degrees = self.graph.degrees()
        for v, x in zip(self.graph.vertices, self.decorations):
            if x is not None and tuple(module.arity(x)) != degrees[v]:
                found.append(f"decoration of {v!r} has arity {module.arity(x)}, vertex has {degrees[v]}")
        return found


class PlanarGraph(DecoratedGraph):
    """A decorated graph whose ports are part of its identity."""

    planar = True


def _default_token(x):
    if x is None or isinstance(x, (str, int, tuple)):
        return x
    token = getattr(x, "token", None)
    if callable(token):
        return token()
    return repr(x)


def as_decorated(g) -> DecoratedGraph:
    return g if isinstance(g, DecoratedGraph) else DecoratedGraph(g)


def hconcat(a: DecoratedGraph, b: DecoratedGraph) -> DecoratedGraph:
    return a._same_kind(gr.hconcat(a.graph, b.graph), a.decorations + b.decorations)


def vconcat(top: DecoratedGraph, bottom: DecoratedGraph) -> DecoratedGraph:
    return top._same_kind(gr.vconcat(top.graph, bottom.graph), top.decorations + bottom.decorations)


def group_act(sigma, g: DecoratedGraph, tau) -> DecoratedGraph:
    return g._same_kind(gr.group_act(sigma, g.graph, tau), g.decorations)


def partial_trace(g: DecoratedGraph, i: int, j: int) -> DecoratedGraph:
    return g._same_kind(_partial_trace(g.graph, i, j), g.decorations)


def restrict(g: DecoratedGraph, J) -> DecoratedGraph:
    sub = _restrict(g.graph, J)
    return g._same_kind(sub, tuple(g.decoration(v) for v in sub.vertices))


def map_decorations(g: DecoratedGraph, f) -> DecoratedGraph:
    return g._same_kind(g.graph, tuple(None if x is None else f(x) for x in g.decorations))


# -- modules of decorations ---------------------------------------------------


class ModuleSpec:
    """How decorations of each arity are acted on by permutations.

    ``arity(x)`` returns ``(k, l)``; ``act(sigma, x, tau)`` returns
    ``sigma . x . tau`` with sigma on the l outputs and tau on the k
    inputs; ``token(x)`` returns a sortable value with a stable ``repr``
    that identifies x; ``orbit_key(x)`` must be constant on orbits.
    """

    def arity(self, x):
        raise NotImplementedError

    def act(self, sigma, x, tau):
        raise NotImplementedError

    def token(self, x):
        return _default_token(x)

    def orbit_key(self, x):
        return tuple(self.arity(x))


@dataclass(frozen=True, order=True)
class Symbol:
    """The formal element ``sigma . name . tau`` of the free module on
    named generators of arity (k, l)."""

    name: str
    k: int
    l: int
    sigma: tuple = None
    tau: tuple = None

    def __post_init__(self):
        if self.sigma is None:
            object.__setattr__(self, "sigma", tuple(range(1, self.l + 1)))
        if self.tau is None:
            object.__setattr__(self, "tau", tuple(range(1, self.k + 1)))

    def __repr__(self):
        return f"Symbol({self.name!r},{self.k},{self.l},{self.sigma},{self.tau})"


class SymbolModule(ModuleSpec):
    """Free module: acting composes onto the recorded permutations."""

    def arity(self, x):
        return (x.k, x.l)

    def act(self, sigma, x, tau):
        s = Permutation(sigma.word) * Permutation(x.sigma)
        t = Permutation(x.tau) * Permutation(tau.word)
        return Symbol(x.name, x.k, x.l, s.word, t.word)

    def token(self, x):
        return (x.name, x.k, x.l, x.sigma, x.tau)

    def orbit_key(self, x):
        return (x.name, x.k, x.l)


class TrivialModule(ModuleSpec):
    """Every permutation acts as the identity; arities come from a callable."""

    def __init__(self, arity=None):
        self._arity = arity

    def arity(self, x):
        if self._arity is not None:
            return self._arity(x)
        return (x.k, x.l)

    def act(self, sigma, x, tau):
        return x

    def orbit_key(self, x):
        return (tuple(self.arity(x)), self.token(x))


class TargetModule(ModuleSpec):
    """Decorations that are elements of a target (tensors, kernels...)."""

    def __init__(self, target):
        self.target = target

    def arity(self, x):
        return self.target.arity(x)

    def act(self, sigma, x, tau):
        return self.target.act(sigma, x, tau)


class GraphModule(ModuleSpec):
    """Planar graphs decorated in ``inner``, acted on through their
    external indices; tokens are normal-form encodings."""

    def __init__(self, inner: ModuleSpec):
        self.inner = inner

    def arity(self, x):
        return x.arity

    def act(self, sigma, x, tau):
        return group_act(sigma, x, tau)

    def token(self, x):
        return gamma_normal_form(x, self.inner).canonical_form(self.inner).encoding

    def orbit_key(self, x):
        return (x.arity, len(x.graph.vertices), len(x.graph.edges), x.graph.loops)


# -- vertex actions and the normal form ----------------------------------------


def vertex_act(sigma: Permutation, v, g: DecoratedGraph, tau: Permutation) -> DecoratedGraph:
    """Reorder the ports of ``v``: out-port p -> sigma(p), in-port p -> tau^{-1}(p)."""
    k, l = g.graph.degrees()[v]
    if sigma.n != l or tau.n != k:
        raise ArityError(f"vertex {v!r} has arity ({k},{l}); got S_{sigma.n} x S_{tau.n}")
    ti = tau.inverse
    G = g.graph
    edges = tuple(
        Edge(
            e.source,
            e.target,
            sigma(e.source_port) if e.source == v else e.source_port,
            ti(e.target_port) if e.target == v else e.target_port,
        )
        for e in G.edges
    )
    inputs = tuple(InputEdge(e.index, e.target, ti(e.port) if e.target == v else e.port) for e in G.inputs)
    outputs = tuple(OutputEdge(e.source, e.index, sigma(e.port) if e.source == v else e.port) for e in G.outputs)
    graph = Graph(G.vertices, edges, inputs, outputs, G.io, G.loops)
    return g._same_kind(graph, g.decorations)


def vertex_act_compensated(sigma, v, g: DecoratedGraph, tau, module: ModuleSpec) -> DecoratedGraph:
    """Move ports by ``vertex_act`` and the decoration by ``sigma . x . tau``;
    the result lies in the same class as ``g``."""
    moved = vertex_act(sigma, v, g, tau)
    idx = g.graph.vertices.index(v)
    decs = list(g.decorations)
    decs[idx] = module.act(sigma, decs[idx], tau)
    return g._same_kind(moved.graph, decs)


def _port_items(G: Graph):
    """Per vertex, the lists of incoming and outgoing edge ends."""
    ins = defaultdict(list)
    outs = defaultdict(list)
    for n, e in enumerate(G.edges):
        outs[e.source].append(("edge", n))
        ins[e.target].append(("edge", n))
    for e in G.inputs:
        ins[e.target].append(("input", e.index))
    for f in G.outputs:
        outs[f.source].append(("output", f.index))
    return ins, outs


def _normalize_component(G: Graph, decs: dict, comp, module: ModuleSpec):
    members = set(comp)
    edges = [(n, e) for n, e in enumerate(G.edges) if e.source in members]
    ins, outs = _port_items(G)
    old_in_port = {}
    old_out_port = {}
    for n, e in edges:
        old_out_port[("edge", n)] = e.source_port
        old_in_port[("edge", n)] = e.target_port
    for e in G.inputs:
        old_in_port[("input", e.index)] = e.port
    for f in G.outputs:
        old_out_port[("output", f.index)] = f.port

    deg = G.degrees()
    ext_in = defaultdict(list)
    ext_out = defaultdict(list)
    for e in G.inputs:
        ext_in[e.target].append(e.index)
    for f in G.outputs:
        ext_out[f.source].append(f.index)
    seed = {
        v: (repr(module.orbit_key(decs[v]) if decs[v] is not None else None), deg[v],
            tuple(sorted(ext_in[v])), tuple(sorted(ext_out[v])))
        for v in comp
    }
    out_nbrs = defaultdict(list)
    in_nbrs = defaultdict(list)
    for _, e in edges:
        out_nbrs[e.source].append((e.target, (0, 0)))
        in_nbrs[e.target].append((e.source, (0, 0)))

    classes = defaultdict(list)
    for n, e in edges:
        classes[(e.source, e.target)].append(n)
    class_list = [c for c in classes.values() if len(c) > 1]

    results = {}

    def leaf(order):
        pos = {v: i for i, v in enumerate(order)}

        def in_key(item):
            kind, ref = item
            if kind == "input":
                return (0, ref)
            return (1, pos[G.edges[ref].source])

        def out_key(item):
            kind, ref = item
            if kind == "output":
                return (0, ref)
            return (1, pos[G.edges[ref].target])

        best = None
        for choice in itertools.product(*(itertools.permutations(c) for c in class_list)):
            rank = {}
            for chosen in choice:
                for r, n in enumerate(chosen):
                    rank[n] = r
            new_in = {}
            new_out = {}
            tokens = []
            new_decs = {}
            for v in order:
                in_items = sorted(ins[v], key=lambda it: (in_key(it), rank.get(it[1], 0) if it[0] == "edge" else 0))
                out_items = sorted(outs[v], key=lambda it: (out_key(it), rank.get(it[1], 0) if it[0] == "edge" else 0))
                for p, it in enumerate(in_items, 1):
                    new_in[it] = p
                for p, it in enumerate(out_items, 1):
                    new_out[it] = p
                # sigma(old out-port) = new out-port; tau(new in-port) = old in-port
                sigma_word = [0] * len(out_items)
                for it in out_items:
                    sigma_word[old_out_port[it] - 1] = new_out[it]
                tau_word = [0] * len(in_items)
                for it in in_items:
                    tau_word[new_in[it] - 1] = old_in_port[it]
                x = decs[v]
                if x is not None:
                    x = module.act(Permutation(sigma_word), x, Permutation(tau_word))
                new_decs[v] = x
                tokens.append(repr(module.token(x)) if x is not None else "")
            structure = (
                tuple(seed[v] for v in order),
                tuple(sorted((pos[e.source], new_out[("edge", n)], pos[e.target], new_in[("edge", n)]) for n, e in edges)),
                tuple(sorted((i, pos[G.input_at(i).target], new_in[("input", i)]) for v in order for i in ext_in[v])),
                tuple(sorted((pos[G.output_at(j).source], j, new_out[("output", j)]) for v in order for j in ext_out[v])),
            )
            value = (structure, tuple(tokens))
            if best is None or value < best[0]:
                best = (value, dict(new_in), dict(new_out), dict(new_decs))
        results.setdefault(best[0], (list(order),) + best[1:])
        return best[0]

    value = search_leaves(comp, seed, out_nbrs, in_nbrs, leaf)
    return value, results[value]


def gamma_normal_form(g: DecoratedGraph, module: ModuleSpec) -> PlanarGraph:
    """The chosen representative of the class of ``g``.

    Vertices are renamed 0..n-1; the ports of each vertex are sorted by
    the canonical position of the other end of each edge (external edges
    first, by index), and the reordering is pushed into the decoration.
    Parallel edges are tried in every order and the least outcome kept.
    """
    G = g.graph
    problems = gr.validate(G)
    if problems:
        raise ValidationError("; ".join(problems), problems)
    decs = g.decoration_map
    from .canon import _components

    pieces = [_normalize_component(G, decs, comp, module) for comp in _components(G)]
    pieces.sort(key=lambda p: p[0])
    order = [v for _, (o, *_rest) in pieces for v in o]
    new_in, new_out, new_decs = {}, {}, {}
    for _, (_, ni, no, nd) in pieces:
        new_in.update(ni)
        new_out.update(no)
        new_decs.update(nd)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted(
        Edge(pos[e.source], pos[e.target], new_out[("edge", n)], new_in[("edge", n)])
        for n, e in enumerate(G.edges)
    )
    inputs = sorted(InputEdge(e.index, pos[e.target], new_in[("input", e.index)]) for e in G.inputs)
    outputs = sorted(
        (OutputEdge(pos[f.source], f.index, new_out[("output", f.index)]) for f in G.outputs),
        key=lambda f: f.index,
    )
    graph = Graph(tuple(range(len(order))), tuple(edges), tuple(inputs), tuple(outputs), tuple(sorted(G.io)), G.loops)
    return PlanarGraph(graph, tuple(new_decs[v] for v in order))


def same_class(a: DecoratedGraph, b: DecoratedGraph, module: ModuleSpec) -> bool:
    return gamma_normal_form(a, module) == gamma_normal_form(b, module)


# -- the monad -------------------------------------------------------------------


def monad_unit(x, arity=None, module: ModuleSpec | None = None) -> PlanarGraph:
    """The planar corolla with ports 1..k, 1..l decorated by ``x``."""
    if arity is None:
        if module is None:
            raise ArityError("monad_unit needs an arity or a module")
        arity = module.arity(x)
    k, l = arity
    return PlanarGraph(gr.corolla(k, l), (x,))


def monad_mult(g: DecoratedGraph) -> PlanarGraph:
    """Substitute each vertex by the planar graph decorating it.

    The p-th incoming edge of a vertex v is glued to input index p of its
    decoration, the p-th outgoing edge to output index p.  Input-output
    edges inside a decoration let wires run straight through v; chains of
    them that close up become loops.
    """
    G = g.graph
    inner = {}
    degrees = G.degrees()
    for v, x in zip(G.vertices, g.decorations):
        if not isinstance(x, DecoratedGraph):
            raise ValidationError(f"vertex {v!r} is not decorated by a graph")
        if x.arity != degrees[v]:
            raise ArityError(f"vertex {v!r} has arity {degrees[v]} but its graph has {x.arity}")
        inner[v] = x

    vertices, decorations, edges, loops = [], [], [], G.loops
    fresh = {}
    for v in G.vertices:
        H = inner[v].graph
        for w, x in zip(H.vertices, inner[v].decorations):
            fresh[(v, w)] = len(vertices)
            vertices.append(len(vertices))
            decorations.append(x)
        for e in H.edges:
            edges.append(Edge(fresh[(v, e.source)], fresh[(v, e.target)], e.source_port, e.target_port))
        loops += H.loops

    # Outer wires: tail is ("in", a) or ("vout", v, port); head is ("out", b) or ("vin", v, port).
    wires = []
    for e in G.edges:
        wires.append((("vout", e.source, e.source_port), ("vin", e.target, e.target_port)))
    for e in G.inputs:
        wires.append((("in", e.index), ("vin", e.target, e.port)))
    for f in G.outputs:
        wires.append((("vout", f.source, f.port), ("out", f.index)))
    for e in G.io:
        wires.append((("in", e.input_index), ("out", e.output_index)))
    by_tail = {w[0]: n for n, w in enumerate(wires)}

    def resolve_tail(tail):
        """A real end inside some decoration, or None if it passes through."""
        if tail[0] == "in":
            return tail
        _, v, port = tail
        item = inner[v].graph.output_at(port)
        if isinstance(item, OutputEdge):
            return ("real", fresh[(v, item.source)], item.port)
        return None

    def follow_head(head):
        """Either a real end, or the next outer wire when passing through."""
        if head[0] == "out":
            return head, None
        _, v, port = head
        item = inner[v].graph.input_at(port)
        if isinstance(item, InputEdge):
            return ("real", fresh[(v, item.target)], item.port), None
        return None, by_tail[("vout", v, item.output_index)]

    used = set()
    inputs, outputs, io = [], [], []
    for n, (tail, head) in enumerate(wires):
        start = resolve_tail(tail)
        if start is None:
            continue
        used.add(n)
        end, nxt = follow_head(head)
        while end is None:
            used.add(nxt)
            end, nxt = follow_head(wires[nxt][1])
        if start[0] == "in" and end[0] == "out":
            io.append(IOEdge(start[1], end[1]))
        elif start[0] == "in":
            inputs.append(InputEdge(start[1], end[1], end[2]))
        elif end[0] == "out":
            outputs.append(OutputEdge(start[1], end[1], start[2]))
        else:
            edges.append(Edge(start[1], end[1], start[2], end[2]))
    # Whatever is left runs in closed circuits through input-output edges.
    remaining = [n for n in range(len(wires)) if n not in used]
    seen = set()
    for n in remaining:
        if n in seen:
            continue
        loops += 1
        cur = n
        while cur not in seen:
            seen.add(cur)
            _, cur = follow_head(wires[cur][1])
    graph = Graph(tuple(vertices), tuple(edges), tuple(inputs), tuple(outputs), tuple(sorted(io)), loops)
    return PlanarGraph(graph, tuple(decorations))
