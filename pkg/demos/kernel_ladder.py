"""Compose cosine kernels on the circle by evaluating ladder graphs.

A ladder of n vertices decorated by K(y, x) = cos(x - y) evaluates to the
n-fold operator convolution, which is pi^(n-1) cos(x - y).  Closing the
ladder into a ring gives the trace of that operator.
"""

import math

import numpy as np

from trapkit import graph as gr
from trapkit.decorated import DecoratedGraph
from trapkit.kernel_trap import KernelTrap, generalized_convolution
from trapkit.trace import full_trace

N = 64
K = KernelTrap(N)
cosine = K.from_expr(1, 1, "cos(x1 - y1)")


def ladder(n):
    g = gr.corolla(1, 1)
    for _ in range(n - 1):
        g = gr.vconcat(gr.corolla(1, 1), g)
    return g


for n in range(1, 5):
    g = ladder(n)
    decorations = ("c",) * n
    open_value = generalized_convolution(DecoratedGraph(g, decorations), N, {"c": cosine})
    error = np.max(np.abs(open_value.term(0).samples - math.pi ** (n - 1) * cosine.samples))
    ring = generalized_convolution(DecoratedGraph(full_trace(g), decorations), N, {"c": cosine})
    trace = float(ring.term(0).samples)
    print(f"n={n}  max |ladder - pi^{n - 1} cos| = {error:.1e}   trace = {trace:.12f}   2 pi^{n} = {2 * math.pi**n:.12f}")

# The delta kernel is a formal wire: closing it on itself yields the loop.
closed = generalized_convolution(gr.loop_graph(), N)
print("closed delta has loop degrees", closed.degrees)
