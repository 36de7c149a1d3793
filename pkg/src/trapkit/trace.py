"""Partial traces on graphs, the full trace and the composition they induce.

``partial_trace(g, i, j)`` plugs output j of ``g`` back into input i.  The
two edge ends involved can each be an ordinary external edge or one end of
an input-output edge, which gives five shapes of result: a new internal
edge, an output edge, an input edge, an input-output edge, or a loop when
both ends belong to the same input-output edge.
"""

from __future__ import annotations

from .errors import ArityError
from .graph import Edge, Graph, InputEdge, IOEdge, OutputEdge, hconcat
from .perm import Permutation, delete_point


def _check_indices(g: Graph, i: int, j: int):
    if not (1 <= i <= g.n_inputs and 1 <= j <= g.n_outputs):
        raise ArityError(f"t_{{{i},{j}}} on a graph of arity ({g.n_inputs},{g.n_outputs})")


def partial_trace(g: Graph, i: int, j: int) -> Graph:
    _check_indices(g, i, j)
    e_in = g.input_at(i)
    f_out = g.output_at(j)
    edges = list(g.edges)
    inputs = [e for e in g.inputs if e is not e_in]
    outputs = [f for f in g.outputs if f is not f_out]
    io = [e for e in g.io if e is not e_in and e is not f_out]
    loops = g.loops

    if isinstance(e_in, InputEdge) and isinstance(f_out, OutputEdge):
        edges.append(Edge(f_out.source, e_in.target, f_out.port, e_in.port))
    elif isinstance(f_out, OutputEdge):
        outputs.append(OutputEdge(f_out.source, e_in.output_index, f_out.port))
    elif isinstance(e_in, InputEdge):
        inputs.append(InputEdge(f_out.input_index, e_in.target, e_in.port))
    elif e_in is not f_out:
        io.append(IOEdge(f_out.input_index, e_in.output_index))
    else:
        loops += 1

    # Closing the gaps left by i and j is point deletion on the identity:
    # the surviving letters, read in order, are renumbered 1..n-1.
    def renumber(n, gone):
        kept = [a for a in range(1, n + 1) if a != gone]
        return dict(zip(kept, delete_point(Permutation.identity(n), gone).word))

    in_map = renumber(g.n_inputs, i)
    out_map = renumber(g.n_outputs, j)

    def new_in(a):
        return in_map.get(a, a)

    def new_out(b):
        return out_map.get(b, b)

    return Graph(
        vertices=g.vertices,
        edges=tuple(edges),
        inputs=tuple(InputEdge(new_in(e.index), e.target, e.port) for e in inputs),
        outputs=tuple(OutputEdge(f.source, new_out(f.index), f.port) for f in outputs),
        io=tuple(sorted(IOEdge(new_in(e.input_index), new_out(e.output_index)) for e in io)),
        loops=loops,
    )


def full_trace(g: Graph) -> Graph:
    """``t_{1,1} o ... o t_{k,k}``: close every input against its output."""
    if g.n_inputs != g.n_outputs:
        raise ArityError(f"full trace needs a square graph, got ({g.n_inputs},{g.n_outputs})")
    for k in range(g.n_inputs, 0, -1):
        g = partial_trace(g, k, k)
    return g


def derived_vcompose(top: Graph, bottom: Graph) -> Graph:
    """``top o bottom`` rebuilt from ``*`` and traces alone.

    With bottom of arity (k,l), the traces ``t_{k+l,l}``, ..., ``t_{k+1,1}``
    are applied in that order to ``bottom * top``.
    """
    k, l = bottom.arity
    if top.n_inputs != l:
        raise ArityError(f"cannot compose: o(bottom)={l} but i(top)={top.n_inputs}")
    g = hconcat(bottom, top)
    for m in range(l, 0, -1):
        g = partial_trace(g, k + m, m)
    return g
