"""Split a graph into indecomposable pieces and put it back together."""

from pathlib import Path

from trapkit import graph as gr
from trapkit.analysis import is_indecomposable, minimal_decomposition
from trapkit.textformat import emit_graph, parse_graph

g = parse_graph((Path(__file__).parent / "data" / "example.graph").read_text())
d = minimal_decomposition(g)

print(f"{len(d.parts)} indecomposable part(s), {d.pass_through} pass-through wire(s), {d.loops} loop(s)")
print("output permutation:", d.gamma.word)
for n, part in enumerate(d.parts, 1):
    print(emit_graph(part, f"part{n}"), "indecomposable:", is_indecomposable(part))
print(emit_graph(d.remainder, "remainder"))
print("recombination isomorphic to the input:", gr.is_isomorphic(d.recombine(), g, ports=True))
