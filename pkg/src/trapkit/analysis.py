"""Paths, cycles, path-stable vertex sets and minimal decompositions.

A set of vertices is path-stable when every path leaving it stays inside.
The inclusion-minimal path-stable sets are the strongly connected
components with no edge leaving them; cutting them off the top of a graph
gives its minimal decomposition

    G ~ gamma . (G_1 * ... * G_k * I_p) o G_0  *  O^{*l}

with indecomposable parts G_i, a remainder G_0 on the other vertices, p
wires that run past the parts, and l loops.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .canon import canonical_form
from .errors import DecompositionError, ValidationError
from .graph import (
    Graph,
    InputEdge,
    IOEdge,
    OutputEdge,
    group_act,
    hconcat,
    hconcat_all,
    loop_graph,
    unit,
    vconcat,
)
from .perm import Permutation


def successors(g: Graph) -> dict:
    succ = defaultdict(set)
    for e in g.edges:
        succ[e.source].add(e.target)
    return succ


def reachable_set(g: Graph, x) -> frozenset:
    """All vertices at the end of a path starting at ``x`` (``x`` included)."""
    if x not in g.vertices:
        raise ValidationError(f"{x!r} is not a vertex")
    succ = successors(g)
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def minimal_stable_sets(g: Graph) -> list:
    """The inclusion-minimal path-stable sets, listed by first vertex."""
    if not g.vertices:
        raise DecompositionError("a graph without vertices has no path-stable set")
    reach = {v: reachable_set(g, v) for v in g.vertices}
    minimal = []
    for v in g.vertices:
        r = reach[v]
        if all(reach[w] == r for w in r) and r not in minimal:
            minimal.append(r)
    return minimal


def has_cycle(g: Graph) -> bool:
    """True when some path of positive length returns to its start."""
    succ = successors(g)
    state = {}

    for root in g.vertices:
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state.get(w) == 1:
                return True
            elif w not in state:
                state[w] = 1
                stack.append((w, iter(succ[w])))
    return False


def is_cycle_free(g: Graph) -> bool:
    """Membership in the sub-ProP of graphs with no cycle and no loop."""
    return g.loops == 0 and not has_cycle(g)


def strip(g: Graph) -> Graph:
    """Delete the input-output edges and loops, keeping the index order."""
    in_rank = {a: r for r, a in enumerate(sorted(e.index for e in g.inputs), 1)}
    out_rank = {b: r for r, b in enumerate(sorted(f.index for f in g.outputs), 1)}
    return Graph(
        vertices=g.vertices,
        edges=g.edges,
        inputs=tuple(InputEdge(in_rank[e.index], e.target, e.port) for e in g.inputs),
        outputs=tuple(OutputEdge(f.source, out_rank[f.index], f.port) for f in g.outputs),
    )


def restrict(g: Graph, J) -> Graph:
    """The subgraph on ``J``; edges crossing its boundary become external.

    Inherited inputs and input-output edges keep their relative order and
    come first; edges cut on the way in are appended in edge order.  The
    same rule indexes the outputs.  Loops are dropped.
    """
    J = set(J)
    if not J <= set(g.vertices):
        raise ValidationError("restriction to a set that is not a subset of the vertices")
    inherited_in = sorted(
        [(e.index, e) for e in g.inputs if e.target in J] + [(e.input_index, e) for e in g.io],
        key=lambda p: p[0],
    )
    inherited_out = sorted(
        [(f.index, f) for f in g.outputs if f.source in J] + [(e.output_index, e) for e in g.io],
        key=lambda p: p[0],
    )
    cut_in = [e for e in g.edges if e.source not in J and e.target in J]
    cut_out = [e for e in g.edges if e.source in J and e.target not in J]
    in_index = {id(e): r for r, (_, e) in enumerate(inherited_in, 1)}
    out_index = {id(f): r for r, (_, f) in enumerate(inherited_out, 1)}
    n_in = len(inherited_in)
    n_out = len(inherited_out)
    inputs = [InputEdge(in_index[id(e)], e.target, e.port) for _, e in inherited_in if isinstance(e, InputEdge)]
    inputs += [InputEdge(n_in + r, e.target, e.target_port) for r, e in enumerate(cut_in, 1)]
    outputs = [OutputEdge(f.source, out_index[id(f)], f.port) for _, f in inherited_out if isinstance(f, OutputEdge)]
    outputs += [OutputEdge(e.source, n_out + r, e.source_port) for r, e in enumerate(cut_out, 1)]
    io = [IOEdge(in_index[id(e)], out_index[id(e)]) for e in g.io]
    return Graph(
        vertices=tuple(v for v in g.vertices if v in J),
        edges=tuple(e for e in g.edges if e.source in J and e.target in J),
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        io=tuple(io),
    )


def is_strongly_connected(g: Graph) -> bool:
    if not g.vertices:
        return False
    first = g.vertices[0]
    if reachable_set(g, first) != frozenset(g.vertices):
        return False
    back = Graph(vertices=g.vertices, edges=tuple(type(e)(e.target, e.source) for e in g.edges))
    return reachable_set(back, first) == frozenset(g.vertices)


def is_indecomposable(g: Graph) -> bool:
    """Either exactly one loop and nothing else, or a loop-free graph with
    vertices, no input-output edge, and a path between any two vertices."""
    if g.loops == 1 and not g.vertices and not g.io:
        return True
    return bool(g.vertices) and not g.io and g.loops == 0 and is_strongly_connected(g)


@dataclass(frozen=True)
class MinimalDecomposition:
    """``gamma . (parts[0] * ... * I_pass_through) o remainder * O^{*loops}``.

    ``part_vertices[i]`` is the set of vertices of the input graph that
    ``parts[i]`` is built on; the remainder keeps its vertex ids too.
    """

    gamma: Permutation
    parts: tuple
    pass_through: int
    remainder: Graph
    loops: int
    part_vertices: tuple = ()

    def top(self) -> Graph:
        return group_act(
            self.gamma,
            hconcat(hconcat_all(self.parts), unit(self.pass_through)),
            Permutation.identity(sum(p.n_inputs for p in self.parts) + self.pass_through),
        )

    def recombine(self) -> Graph:
        g = vconcat(self.top(), self.remainder)
        for _ in range(self.loops):
            g = hconcat(g, loop_graph())
        return g


def minimal_decomposition(g: Graph, ports: bool = False, labels=None) -> MinimalDecomposition:
    """Split the minimal path-stable sets off the top of ``g``.

    Parts are ordered by canonical form (respecting ``ports``/``labels``
    when given), then by the position of their first vertex.  The
    remainder keeps g's input indices; its outputs are the inputs of the
    top layer in order.  Wires running past the parts (input-output edges
    of g and outputs of the remainder's vertices) are ordered by g's output
    index.
    """
    if not g.vertices:
        raise DecompositionError("minimal decomposition needs at least one vertex")
    stripped = strip(g)
    stable = minimal_stable_sets(g)
    position = {v: i for i, v in enumerate(g.vertices)}
    candidates = []
    for J in stable:
        part = restrict(stripped, J)
        part_labels = {v: labels[v] for v in J} if labels else None
        key = canonical_form(part, ports, part_labels)
        candidates.append((key, min(position[v] for v in J), J, part))
    candidates.sort(key=lambda c: (c[0], c[1]))
    parts = tuple(c[3] for c in candidates)
    part_sets = tuple(c[2] for c in candidates)
    in_parts = set().union(*part_sets)
    rest = [v for v in g.vertices if v not in in_parts]

    # Top-layer inputs: each part's inputs in its own order, then pass-throughs.
    slots = []
    for J, part in zip(part_sets, parts):
        inherited = sorted(e.index for e in g.inputs if e.target in J)
        cut = [e for e in g.edges if e.source not in J and e.target in J]
        for a in inherited:
            slots.append(("input", a))
        for e in cut:
            slots.append(("edge", e))
    passing = sorted(
        [(e.output_index, ("io", e)) for e in g.io]
        + [(f.index, ("output", f)) for f in g.outputs if f.source not in in_parts],
        key=lambda p: p[0],
    )
    slots += [p[1] for p in passing]

    # Top-layer outputs: each part's outputs (by g's order), then pass-throughs.
    gamma_word = []
    for J in part_sets:
        gamma_word += sorted(f.index for f in g.outputs if f.source in J)
    gamma_word += [p[0] for p in passing]

    inputs, outputs, io = [], [], []
    for pos, (kind, item) in enumerate(slots, 1):
        if kind == "input":
            io.append(IOEdge(item, pos))
        elif kind == "edge":
            outputs.append(OutputEdge(item.source, pos, item.source_port))
        elif kind == "io":
            io.append(IOEdge(item.input_index, pos))
        else:
            outputs.append(OutputEdge(item.source, pos, item.port))
    inputs = [e for e in g.inputs if e.target not in in_parts]
    restset = set(rest)
    remainder = Graph(
        vertices=tuple(rest),
        edges=tuple(e for e in g.edges if e.source in restset and e.target in restset),
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        io=tuple(sorted(io)),
    )
    return MinimalDecomposition(
        gamma=Permutation(gamma_word),
        parts=parts,
        pass_through=len(passing),
        remainder=remainder,
        loops=g.loops,
        part_vertices=part_sets,
    )
