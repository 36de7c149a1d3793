"""Canonical forms of graphs by colour refinement and individualisation.

Vertices start with a colour built from everything an isomorphism must
preserve (degrees, attached external indices, optional labels and ports).
Colours are refined against neighbour colours until stable; whenever a cell
still holds several vertices, each of them is individualised in turn and the
search recurses.  Every leaf orders the vertices completely and yields an
encoding; the least encoding over all leaves is the canonical one.

Weakly connected components are encoded separately and sorted, so many
identical components do not multiply the search.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .errors import ValidationError
from .graph import Graph, validate


@dataclass(frozen=True, order=True)
class CanonicalForm:
    encoding: bytes

    def hex(self) -> str:
        return self.encoding.hex()

    def __str__(self):
        return self.encoding.decode()


def _rank(values: dict) -> dict:
    order = {c: r for r, c in enumerate(sorted(set(values.values())))}
    return {v: order[c] for v, c in values.items()}


def refine(vertices, colors, out_nbrs, in_nbrs):
    """Refine ``colors`` until the partition stops splitting."""
    colors = _rank(colors)
    while True:
        signature = {
            v: (
                colors[v],
                tuple(sorted((colors[w], tag) for w, tag in out_nbrs[v])),
                tuple(sorted((colors[w], tag) for w, tag in in_nbrs[v])),
            )
            for v in vertices
        }
        new = _rank(signature)
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def search_leaves(vertices, colors, out_nbrs, in_nbrs, leaf):
    """Least ``leaf(order)`` over the individualisation-refinement tree."""
    best = None

    def visit(colors):
        nonlocal best
        colors = refine(vertices, colors, out_nbrs, in_nbrs)
        cells = defaultdict(list)
        for v in vertices:
            cells[colors[v]].append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(vertices, key=colors.__getitem__)
            value = leaf(order)
            if best is None or value < best:
                best = value
            return
        for v in cells[target]:
            split = {w: (colors[w], 0 if w == v else 1) for w in vertices}
            visit(split)

    visit(dict(colors))
    return best


def _components(g: Graph):
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        a, b = find(e.source), find(e.target)
        if a != b:
            parent[a] = b
    groups = defaultdict(list)
    for v in g.vertices:
        groups[find(v)].append(v)
    return list(groups.values())


def _local_structure(g: Graph, ports: bool, labels):
    ins = defaultdict(list)
    outs = defaultdict(list)
    for e in g.inputs:
        ins[e.target].append((e.index, e.port if ports else 0))
    for e in g.outputs:
        outs[e.source].append((e.index, e.port if ports else 0))
    out_nbrs = defaultdict(list)
    in_nbrs = defaultdict(list)
    for e in g.edges:
        tag = (e.source_port, e.target_port) if ports else (0, 0)
        out_nbrs[e.source].append((e.target, tag))
        in_nbrs[e.target].append((e.source, tag))
    deg = g.degrees()
    seed = {}
    for v in g.vertices:
        label = labels.get(v) if labels else None
        seed[v] = (
            repr(label),
            deg[v],
            tuple(sorted(ins[v])),
            tuple(sorted(outs[v])),
        )
    return seed, out_nbrs, in_nbrs


def _component_encoding(order, seed, g_edges, ports):
    pos = {v: i for i, v in enumerate(order)}
    vertex_part = tuple(seed[v] for v in order)
    edge_part = tuple(
        sorted(
            (pos[e.source], pos[e.target]) + ((e.source_port, e.target_port) if ports else ())
            for e in g_edges
        )
    )
    return (len(order), vertex_part, edge_part)


def canonical_labeling(g: Graph, ports: bool = False, labels=None):
    """Return ``(form, order)``: the canonical form and a vertex order
    realising it (components concatenated in encoding order)."""
    problems = validate(g)
    if problems:
        raise ValidationError("; ".join(problems), problems)
    seed, out_nbrs, in_nbrs = _local_structure(g, ports, labels)
    parts = []
    for comp in _components(g):
        members = set(comp)
        comp_edges = [e for e in g.edges if e.source in members]
        found = {}

        def leaf(order, comp_edges=comp_edges):
            enc = _component_encoding(order, seed, comp_edges, ports)
            found.setdefault(enc, list(order))
            return enc

        enc = search_leaves(comp, seed, out_nbrs, in_nbrs, leaf)
        parts.append((enc, found[enc]))
    parts.sort(key=lambda p: p[0])
    header = (
        g.n_inputs,
        g.n_outputs,
        tuple(sorted((e.input_index, e.output_index) for e in g.io)),
        g.loops,
    )
    encoding = repr((header, tuple(p[0] for p in parts))).encode()
    order = [v for p in parts for v in p[1]]
    return CanonicalForm(encoding), order


def canonical_form(g: Graph, ports: bool = False, labels=None) -> CanonicalForm:
    return canonical_labeling(g, ports, labels)[0]


def canonical_graph(g: Graph, ports: bool = False, labels=None) -> Graph:
    """The representative of ``g``'s class with vertices renamed 0..n-1 in
    canonical order and all edge lists sorted."""
    _, order = canonical_labeling(g, ports, labels)
    pos = {v: i for i, v in enumerate(order)}
    h = g.relabel(pos)
    return Graph(
        vertices=tuple(range(len(order))),
        edges=tuple(sorted(h.edges)),
        inputs=tuple(sorted(h.inputs)),
        outputs=tuple(sorted(h.outputs, key=lambda e: e.index)),
        io=tuple(sorted(h.io)),
        loops=h.loops,
    )
