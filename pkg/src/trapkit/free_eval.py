"""Targets, axiom checking, completion of quasi-targets and evaluation.

A target is anything with the operations of a TraP: horizontal product,
permutation actions on both sides, partial traces and two units.  Graphs
form one; dense tensors and grid kernels are others.  Evaluating a
decorated graph in a target replaces each vertex by the element its
decoration is bound to and performs the gluing the graph describes.

Two evaluators are provided.  ``strategy="naive"`` cuts the lowest
internal edge, evaluates the rest recursively and traces the cut pair
back together; it is slow but follows the definition literally and serves
as the oracle.  ``strategy="scheduled"`` (the default) adds vertices one at
a time and closes every edge as soon as both its ends are present, which
keeps intermediate elements small.
"""

from __future__ import annotations

import os
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass, field

from . import decorated as dg
from .analysis import minimal_decomposition
from .errors import (
    ArityError,
    BindingError,
    DecompositionError,
    IrreduciblyPartial,
    PartialTraceUndefined,
    TrapkitError,
)
from .graph import Graph, InputEdge, OutputEdge, corolla
from .perm import Permutation, block_sum, delete_point, delete_position, interchange


def default_tolerance() -> float:
    return float(os.environ.get("TRAPKIT_TOL", "1e-9"))


# -- the target interface -------------------------------------------------------


class TrapTarget(ABC):
    """The operations evaluation needs.

    ``partial_trace`` may raise :class:`PartialTraceUndefined`; a target
    doing so should set ``quasi = True``.  ``exact`` says whether
    ``equal`` compares exactly.
    """

    name = "target"
    exact = True
    quasi = False

    @abstractmethod
    def arity(self, x) -> tuple: ...

    @abstractmethod
    def hconcat(self, x, y): ...

    @abstractmethod
    def act(self, sigma: Permutation, x, tau: Permutation): ...

    @abstractmethod
    def partial_trace(self, x, i: int, j: int): ...

    @abstractmethod
    def unit0(self): ...

    @abstractmethod
    def unit1(self): ...

    @abstractmethod
    def equal(self, x, y) -> bool: ...

    def add(self, x, y):
        raise TrapkitError(f"{self.name} has no addition")

    def is_zero(self, x) -> bool:
        return False

    def remove_identity_wire(self, x, i: int, j: int):
        """If input ``i`` of ``x`` runs straight to output ``j`` as a bare
        unit wire, return ``x`` without it; otherwise ``None``."""
        return None

    def hconcat_all(self, items):
        out = self.unit0()
        for x in items:
            out = self.hconcat(out, x)
        return out

    def identity(self, n: int):
        return self.hconcat_all([self.unit1()] * n)

    def loop(self):
        """``t_{1,1}(I)``, the value of a loop."""
        return self.partial_trace(self.unit1(), 1, 1)

    def check_arity(self, x, k: int, l: int, what="element"):
        if tuple(self.arity(x)) != (k, l):
            raise ArityError(f"{what} has arity {tuple(self.arity(x))}, expected ({k},{l})")


def compose(target: TrapTarget, q, p):
    """``q o p``: the target's own composition when it has one, otherwise
    the one derived from traces."""
    native = getattr(target, "compose", None)
    if native is not None:
        return native(q, p)
    return derived_compose(target, q, p)


def derived_compose(target: TrapTarget, q, p):
    """``q o p = t_{k+1,1} o ... o t_{k+l,l}(p * q)`` for p of arity (k,l)."""
    k, l = target.arity(p)
    lq, _ = target.arity(q)
    if lq != l:
        raise ArityError(f"cannot compose: o(p)={l} but i(q)={lq}")
    x = target.hconcat(p, q)
    for m in range(l, 0, -1):
        x = target.partial_trace(x, k + m, m)
    return x


def generalized_trace(target: TrapTarget, p):
    """``t_{1,1} o ... o t_{k,k}(p)``."""
    k, l = target.arity(p)
    if k != l:
        raise ArityError(f"trace needs a square element, got ({k},{l})")
    for m in range(k, 0, -1):
        p = target.partial_trace(p, m, m)
    return p


# -- graphs as a target -----------------------------------------------------------


class GraphTrap(TrapTarget):
    """Decorated graphs with concatenation, index actions and gluing.

    Elements are :class:`DecoratedGraph` (plain graphs are wrapped).
    Equality is isomorphism, respecting ports for planar graphs and
    decorations through ``module`` tokens.
    """

    name = "graph"

    def __init__(self, planar: bool = False, module=None):
        self.planar = planar
        self.module = module
        self._kind = dg.PlanarGraph if planar else dg.DecoratedGraph

    def wrap(self, g):
        if isinstance(g, Graph):
            return self._kind(g)
        return g

    def arity(self, x):
        return self.wrap(x).arity

    def hconcat(self, x, y):
        return dg.hconcat(self.wrap(x), self.wrap(y))

    def act(self, sigma, x, tau):
        return dg.group_act(sigma, self.wrap(x), tau)

    def partial_trace(self, x, i, j):
        return dg.partial_trace(self.wrap(x), i, j)

    def compose(self, q, p):
        return dg.vconcat(self.wrap(q), self.wrap(p))

    def unit0(self):
        return self._kind(Graph())

    def unit1(self):
        return self._kind(Graph(io=(dg.IOEdge(1, 1),)))

    def generator(self, k, l, decoration=None):
        """The corolla carrying ``decoration``."""
        return self._kind(corolla(k, l), (decoration,))

    def equal(self, x, y):
        x, y = self.wrap(x), self.wrap(y)
        if self.planar:
            x, y = dg.PlanarGraph(x.graph, x.decorations), dg.PlanarGraph(y.graph, y.decorations)
        return x.canonical_form(self.module) == y.canonical_form(self.module)


# -- completion of quasi-targets -----------------------------------------------------


@dataclass(frozen=True)
class CompletedElement:
    """``sum_d O^d * x_d``: loop degree mapped to a base element."""

    k: int
    l: int
    terms: tuple  # ((degree, base element), ...) sorted by degree

    @property
    def arity(self):
        return (self.k, self.l)

    def term(self, degree: int):
        for d, x in self.terms:
            if d == degree:
                return x
        return None

    @property
    def degrees(self):
        return tuple(d for d, _ in self.terms)


class CompletedTrap(TrapTarget):
    """A quasi-target with a formal central loop symbol adjoined.

    Traces defined in the base are taken there.  A trace the base cannot
    take is accepted only when it closes a bare unit wire onto itself;
    that wire is then removed and the loop degree goes up by one.  Any
    other undefined trace raises :class:`IrreduciblyPartial`.
    """

    quasi = False

    def __init__(self, base: TrapTarget):
        self.base = base
        self.name = f"completed {base.name}"
        self.exact = base.exact

    def embed(self, x, degree: int = 0) -> CompletedElement:
        k, l = self.base.arity(x)
        return CompletedElement(k, l, ((degree, x),))

    def loop(self) -> CompletedElement:
        return self.embed(self.base.unit0(), 1)

    def _make(self, k, l, items):
        merged = {}
        for d, x in items:
            merged[d] = self.base.add(merged[d], x) if d in merged else x
        return CompletedElement(k, l, tuple(sorted(merged.items(), key=lambda t: t[0])))

    def arity(self, x):
        return x.arity

    def hconcat(self, x, y):
        return self._make(
            x.k + y.k,
            x.l + y.l,
            [(dx + dy, self.base.hconcat(a, b)) for dx, a in x.terms for dy, b in y.terms],
        )

    def act(self, sigma, x, tau):
        return self._make(x.k, x.l, [(d, self.base.act(sigma, a, tau)) for d, a in x.terms])

    def partial_trace(self, x, i, j):
        items = []
        for d, a in x.terms:
            try:
                items.append((d, self.base.partial_trace(a, i, j)))
            except PartialTraceUndefined as exc:
                rest = self.base.remove_identity_wire(a, i, j)
                if rest is None:
                    raise IrreduciblyPartial(f"t_{{{i},{j}}} is undefined and not a closed unit wire") from exc
                items.append((d + 1, rest))
        return self._make(x.k - 1, x.l - 1, items)

    def unit0(self):
        return self.embed(self.base.unit0())

    def unit1(self):
        return self.embed(self.base.unit1())

    def add(self, x, y):
        return self._make(x.k, x.l, list(x.terms) + list(y.terms))

    def is_zero(self, x):
        return all(self.base.is_zero(a) for _, a in x.terms)

    def equal(self, x, y):
        if x.arity != y.arity:
            return False
        dx = {d: a for d, a in x.terms if not self.base.is_zero(a)}
        dy = {d: a for d, a in y.terms if not self.base.is_zero(a)}
        if set(dx) != set(dy):
            return False
        return all(self.base.equal(dx[d], dy[d]) for d in dx)

    def remove_identity_wire(self, x, i, j):
        return None


def complete_quasi_trap(target: TrapTarget) -> CompletedTrap:
    return target if isinstance(target, CompletedTrap) else CompletedTrap(target)


# -- axiom checking --------------------------------------------------------------


@dataclass
class AxiomReport:
    """Per-axiom tallies: passed, failed, and skipped because a trace was
    undefined."""

    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name, outcome, detail=""):
        c = self.counts.setdefault(name, [0, 0, 0])
        if outcome is None:
            c[2] += 1
        elif outcome:
            c[0] += 1
        else:
            c[1] += 1
            if len(self.failures) < 20:
                self.failures.append((name, detail))

    @property
    def ok(self) -> bool:
        return all(c[1] == 0 for c in self.counts.values())

    def passed(self, name) -> int:
        return self.counts.get(name, [0, 0, 0])[0]

    def failed(self, name) -> int:
        return self.counts.get(name, [0, 0, 0])[1]

    def lines(self):
        for name in self.counts:
            p, f, s = self.counts[name]
            status = "ok" if f == 0 else "FAIL"
            yield f"{name:<26} {status:<4} passed={p} failed={f} undefined={s}"

    def __str__(self):
        return "\n".join(self.lines())


def _perm(rng, n):
    return Permutation(rng.permutation(n) + 1)


def _arity(rng, lo, hi):
    return int(rng.integers(lo, hi + 1)), int(rng.integers(lo, hi + 1))


class _Checks:
    """One method per axiom; each returns True, False or raises
    PartialTraceUndefined."""

    def __init__(self, T: TrapTarget, sample, rng, max_arity, max_slots=None):
        self.T, self.sample, self.rng, self.m = T, sample, rng, max_arity
        self.max_slots = max_slots

    def draw(self, lo=0, hi=None, share=1, extra=0):
        """An element with lo <= k, l <= hi.  With a slot budget, k + l stays
        within ``max_slots // share - extra`` so products stay small."""
        hi = self.m if hi is None else hi
        budget = None if self.max_slots is None else max(2 * lo, self.max_slots // share - extra)
        while True:
            k, l = _arity(self.rng, lo, hi)
            if budget is None or k + l <= budget:
                return self.sample(self.rng, k, l), k, l

    def eq(self, a, b):
        return self.T.equal(a, b)

    # module structure
    def action_unit(self):
        p, k, l = self.draw()
        return self.eq(self.T.act(Permutation.identity(l), p, Permutation.identity(k)), p)

    def action_associativity(self):
        T, r = self.T, self.rng
        p, k, l = self.draw()
        s1, s2, t1, t2 = _perm(r, l), _perm(r, l), _perm(r, k), _perm(r, k)
        il, ik = Permutation.identity(l), Permutation.identity(k)
        left = self.eq(T.act(s1, T.act(s2, p, ik), ik), T.act(s1 * s2, p, ik))
        right = self.eq(T.act(il, T.act(il, p, t1), t2), T.act(il, p, t1 * t2))
        mixed = self.eq(T.act(s1, T.act(il, p, t1), ik), T.act(il, T.act(s1, p, ik), t1))
        return left and right and mixed

    # horizontal concatenation
    def hconcat_associativity(self):
        T = self.T
        half = max(1, self.m // 2)
        (a, *_), (b, *_), (c, *_) = self.draw(0, half, 3), self.draw(0, half, 3), self.draw(0, half, 3)
        return self.eq(T.hconcat(a, T.hconcat(b, c)), T.hconcat(T.hconcat(a, b), c))

    def hconcat_unit(self):
        T = self.T
        p, _, _ = self.draw()
        return self.eq(T.hconcat(p, T.unit0()), p) and self.eq(T.hconcat(T.unit0(), p), p)

    def hconcat_action(self):
        T, r = self.T, self.rng
        half = max(1, self.m // 2)
        p, k, l = self.draw(0, half, 2)
        q, k2, l2 = self.draw(0, half, 2)
        s, s2, t, t2 = _perm(r, l), _perm(r, l2), _perm(r, k), _perm(r, k2)
        lhs = T.hconcat(T.act(s, p, t), T.act(s2, q, t2))
        rhs = T.act(block_sum(s, s2), T.hconcat(p, q), block_sum(t, t2))
        return self.eq(lhs, rhs)

    def hconcat_commutativity(self):
        T = self.T
        half = max(1, self.m // 2)
        p, k, l = self.draw(0, half, 2)
        q, k2, l2 = self.draw(0, half, 2)
        lhs = T.act(interchange(l, l2), T.hconcat(p, q), Permutation.identity(k + k2))
        rhs = T.act(Permutation.identity(l + l2), T.hconcat(q, p), interchange(k, k2))
        return self.eq(lhs, rhs)

    # partial traces
    def trace_commutation(self):
        T, r = self.T, self.rng
        p, k, l = self.draw(2, max(2, self.m))
        i, j = int(r.integers(1, k + 1)), int(r.integers(1, l + 1))
        i2, j2 = int(r.integers(1, k)), int(r.integers(1, l))
        lhs = T.partial_trace(T.partial_trace(p, i, j), i2, j2)
        if i2 < i and j2 < j:
            rhs = T.partial_trace(T.partial_trace(p, i2, j2), i - 1, j - 1)
        elif i2 >= i and j2 < j:
            rhs = T.partial_trace(T.partial_trace(p, i2 + 1, j2), i, j - 1)
        elif i2 < i and j2 >= j:
            rhs = T.partial_trace(T.partial_trace(p, i2, j2 + 1), i - 1, j)
        else:
            rhs = T.partial_trace(T.partial_trace(p, i2 + 1, j2 + 1), i, j)
        return self.eq(lhs, rhs)

    def trace_action(self):
        T, r = self.T, self.rng
        p, k, l = self.draw(1)
        s, t = _perm(r, l), _perm(r, k)
        i, j = int(r.integers(1, k + 1)), int(r.integers(1, l + 1))
        lhs = T.partial_trace(T.act(s, p, t), i, j)
        inner = T.partial_trace(p, t(i), s.inverse(j))
        rhs = T.act(delete_point(s, j), inner, delete_position(t, i))
        return self.eq(lhs, rhs)

    def trace_hconcat(self):
        T, r = self.T, self.rng
        half = max(1, self.m // 2)
        p, k, l = self.draw(1, half, 2)
        q, k2, l2 = self.draw(1, half, 2)
        pq = T.hconcat(p, q)
        if r.integers(2):
            i, j = int(r.integers(1, k + 1)), int(r.integers(1, l + 1))
            return self.eq(T.partial_trace(pq, i, j), T.hconcat(T.partial_trace(p, i, j), q))
        i, j = int(r.integers(1, k2 + 1)), int(r.integers(1, l2 + 1))
        return self.eq(T.partial_trace(pq, k + i, l + j), T.hconcat(p, T.partial_trace(q, i, j)))

    def trace_unit(self):
        T, r = self.T, self.rng
        p, k, l = self.draw(1, extra=2)
        I = T.unit1()
        ik, il = Permutation.identity(k), Permutation.identity(l)
        results = []
        if l >= 1:
            j = int(r.integers(2, l + 2))
            results.append(
                self.eq(T.partial_trace(T.hconcat(I, p), 1, j), T.act(Permutation.cycle(l, range(1, j)), p, ik))
            )
            j = int(r.integers(1, l + 1))
            results.append(
                self.eq(
                    T.partial_trace(T.hconcat(p, I), k + 1, j),
                    T.act(Permutation.cycle(l, range(j, l + 1)).inverse, p, ik),
                )
            )
        if k >= 1:
            i = int(r.integers(2, k + 2))
            results.append(
                self.eq(
                    T.partial_trace(T.hconcat(I, p), i, 1),
                    T.act(il, p, Permutation.cycle(k, range(1, i)).inverse),
                )
            )
            i = int(r.integers(1, k + 1))
            results.append(
                self.eq(T.partial_trace(T.hconcat(p, I), i, l + 1), T.act(il, p, Permutation.cycle(k, range(i, k + 1))))
            )
        return all(results)

    # the reduced generating set
    def reduced_trace_hconcat(self):
        T = self.T
        half = max(1, self.m // 2)
        p, _, _ = self.draw(1, half, 2)
        q, _, _ = self.draw(0, half, 2)
        return self.eq(T.partial_trace(T.hconcat(p, q), 1, 1), T.hconcat(T.partial_trace(p, 1, 1), q))

    def reduced_trace_unit(self):
        T = self.T
        p, _, _ = self.draw(1, extra=2)
        return self.eq(T.partial_trace(T.hconcat(T.unit1(), p), 1, 2), p)


MODULE_AXIOMS = ("action_unit", "action_associativity")
HCONCAT_AXIOMS = ("hconcat_associativity", "hconcat_unit", "hconcat_action", "hconcat_commutativity")
TRACE_AXIOMS = ("trace_commutation", "trace_action", "trace_hconcat", "trace_unit")
REDUCED_AXIOMS = ("reduced_trace_hconcat", "reduced_trace_unit")
ALL_TRAP_AXIOMS = MODULE_AXIOMS + HCONCAT_AXIOMS + TRACE_AXIOMS


def check_trap_axioms(
    target: TrapTarget, sampler, trials: int = 100, rng=None, max_arity: int = 3, axioms=None, max_slots=None
):
    """Run every axiom ``trials`` times on elements from ``sampler(rng, k, l)``.

    ``axioms`` restricts the run to a subset of names (``REDUCED_AXIOMS``
    for the two generating identities only).  ``max_slots`` bounds the
    total number of inputs and outputs of the elements an axiom builds.
    """
    from .sampling import rng_from

    rng = rng_from(rng)
    checks = _Checks(target, sampler, rng, max_arity, max_slots)
    report = AxiomReport()
    for name in axioms or ALL_TRAP_AXIOMS:
        fn = getattr(checks, name)
        for _ in range(trials):
            try:
                report.record(name, bool(fn()))
            except PartialTraceUndefined:
                report.record(name, None)
    return report


class _PropChecks(_Checks):
    def __init__(self, T, sample, rng, max_arity, comp):
        super().__init__(T, sample, rng, max_arity)
        self.comp = comp

    def _chain(self, n, m=None):
        """Composable elements, top first, with the arities along the chain."""
        m = self.m if m is None else m
        dims = [int(self.rng.integers(0, m + 1)) for _ in range(n + 1)]
        return [self.sample(self.rng, dims[t], dims[t + 1]) for t in range(n)][::-1], dims

    def compose_associativity(self):
        (p, q, r), _ = self._chain(3)
        c = self.comp
        return self.eq(c(p, c(q, r)), c(c(p, q), r))

    def compose_unit(self):
        T = self.T
        p, k, l = self.draw()
        return self.eq(self.comp(p, T.identity(k)), p) and self.eq(self.comp(T.identity(l), p), p)

    def interchange(self):
        T = self.T
        half = max(1, self.m // 2)
        (p, q), _ = self._chain(2, half)
        (p2, q2), _ = self._chain(2, half)
        c = self.comp
        return self.eq(c(T.hconcat(p, p2), T.hconcat(q, q2)), T.hconcat(c(p, q), c(p2, q2)))

    def compose_action(self):
        T, r, c = self.T, self.rng, self.comp
        (p, q), dims = self._chain(2)
        k, l, m = dims
        s, t, nu = _perm(r, m), _perm(r, l), _perm(r, k)
        ik, il, im = Permutation.identity(k), Permutation.identity(l), Permutation.identity(m)
        a = self.eq(T.act(s, c(p, q), ik), c(T.act(s, p, il), q))
        b = self.eq(T.act(im, c(p, q), nu), c(p, T.act(il, q, nu)))
        d = self.eq(c(T.act(im, p, t), q), c(p, T.act(t, q, ik)))
        return a and b and d


PROP_AXIOMS = MODULE_AXIOMS + HCONCAT_AXIOMS + (
    "compose_associativity",
    "compose_unit",
    "interchange",
    "compose_action",
)


def check_prop_axioms(target: TrapTarget, sampler, trials: int = 100, rng=None, max_arity: int = 3, axioms=None, composition=None):
    """The ProP axioms with ``composition`` (default: :func:`compose`)."""
    from .sampling import rng_from

    rng = rng_from(rng)
    comp = composition or (lambda q, p: compose(target, q, p))
    checks = _PropChecks(target, sampler, rng, max_arity, comp)
    report = AxiomReport()
    for name in axioms or PROP_AXIOMS:
        fn = getattr(checks, name)
        for _ in range(trials):
            try:
                report.record(name, bool(fn()))
            except PartialTraceUndefined:
                report.record(name, None)
    return report


# -- evaluation -------------------------------------------------------------------


def _resolver(bindings):
    if bindings is None:
        return lambda d: d
    if callable(bindings) and not isinstance(bindings, dict):
        return bindings

    def lookup(d):
        try:
            return bindings[d]
        except KeyError:
            raise BindingError(f"no binding for decoration {d!r}") from None

    return lookup


def _vertex_elements(g: dg.DecoratedGraph, target: TrapTarget, bindings, lift=None) -> dict:
    resolve = _resolver(bindings)
    degrees = g.graph.degrees()
    out = {}
    for v, d in zip(g.graph.vertices, g.decorations):
        k, l = degrees[v]
        gen = getattr(target, "generator", None)
        if gen is not None and (bindings is None or d is None):
            x = gen(k, l, d)
        elif d is None:
            raise BindingError(f"vertex {v!r} has no decoration")
        else:
            x = resolve(d)
            if lift is not None:
                x = lift(x)
        target.check_arity(x, k, l, f"binding of vertex {v!r}")
        out[v] = x
    return out


def cut_edge(g: Graph, n: int) -> Graph:
    """Cut internal edge number ``n`` in two: its target end becomes input 1,
    its source end output 1, and the other indices move up by one."""
    e = g.edges[n]
    return Graph(
        vertices=g.vertices,
        edges=g.edges[:n] + g.edges[n + 1 :],
        inputs=(InputEdge(1, e.target, e.target_port),) + tuple(InputEdge(a.index + 1, a.target, a.port) for a in g.inputs),
        outputs=(OutputEdge(e.source, 1, e.source_port),)
        + tuple(OutputEdge(f.source, f.index + 1, f.port) for f in g.outputs),
        io=tuple(type(x)(x.input_index + 1, x.output_index + 1) for x in g.io),
        loops=g.loops,
    )


def _prepare(target):
    """Complete a quasi-target and return how to lift bound elements into it."""
    if target.quasi:
        target = complete_quasi_trap(target)
    if not isinstance(target, CompletedTrap):
        return target, None

    def lift(x):
        return x if isinstance(x, CompletedElement) else target.embed(x)

    return target, lift


def _power(target, x, n):
    out = target.unit0()
    for _ in range(n):
        out = target.hconcat(out, x)
    return out


def _open_value(G: Graph, elements: dict, target: TrapTarget):
    """Value of a graph without internal edges: loops, io wires and
    vertices side by side, then indices routed by one action."""
    io = sorted(G.io, key=lambda e: e.input_index)
    in_slot, out_slot = {}, {}
    parts = []
    for e in io:
        in_slot[e.input_index] = len(in_slot) + 1
        out_slot[len(out_slot) + 1] = e.output_index
        parts.append(target.unit1())
    by_target = defaultdict(dict)
    by_source = defaultdict(dict)
    for e in G.inputs:
        by_target[e.target][e.port] = e.index
    for f in G.outputs:
        by_source[f.source][f.port] = f.index
    for v in G.vertices:
        base_in, base_out = len(in_slot), len(out_slot)
        for port, a in by_target[v].items():
            in_slot[a] = base_in + port
        for port, b in by_source[v].items():
            out_slot[base_out + port] = b
        parts.append(elements[v])
    x = target.hconcat_all(parts)
    n_in, n_out = len(in_slot), len(out_slot)
    tau = Permutation([in_slot[a] for a in range(1, n_in + 1)])
    sigma = Permutation([out_slot[s] for s in range(1, n_out + 1)])
    x = target.act(sigma, x, tau)
    if G.loops:
        x = target.hconcat(_power(target, target.loop(), G.loops), x)
    return x


def _naive(G: Graph, elements, target):
    if G.edges:
        return target.partial_trace(_naive(cut_edge(G, 0), elements, target), 1, 1)
    return _open_value(G, elements, target)


def eval_free_trap(g, target: TrapTarget, bindings=None, strategy: str = "scheduled"):
    """The value of a decorated graph in ``target``.

    Vertex v contributes the element its decoration is bound to, with
    in-port p of v wired to input slot p of the element and out-port q to
    output slot q.  ``bindings`` maps decorations to elements (a dict or a
    callable); ``None`` uses decorations as elements, or the target's
    ``generator`` when it has one.  Quasi-targets are completed first, so
    loops and closed unit wires come out as powers of the loop symbol.
    """
    g = dg.as_decorated(g)
    target, lift = _prepare(target)
    elements = _vertex_elements(g, target, bindings, lift)
    if strategy == "naive":
        return _naive(g.graph, elements, target)
    if strategy == "scheduled":
        return _scheduled(g.graph, elements, target)
    raise ValueError(f"unknown strategy {strategy!r}")


def _scheduled(G: Graph, elements, target):
    """Add vertices one at a time and close each edge once both ends exist.

    The running element has, as inputs, the open edge ends first (in the
    order they were opened) followed by the graph's inputs attached so
    far; outputs likewise.  Index bookkeeping is kept in two lists naming
    what each slot is.
    """
    if not G.edges:
        return _open_value(G, elements, target)
    x = target.unit0()
    ins, outs = [], []  # slot -> ("edge", r) | ("in", a)  /  ("edge", r) | ("out", b)
    present = set()
    remaining = list(G.vertices)
    in_at = defaultdict(dict)
    out_at = defaultdict(dict)
    for r, e in enumerate(G.edges):
        out_at[e.source][e.source_port] = ("edge", r)
        in_at[e.target][e.target_port] = ("edge", r)
    for a in G.inputs:
        in_at[a.target][a.port] = ("in", a.index)
    for f in G.outputs:
        out_at[f.source][f.port] = ("out", f.index)

    while remaining:
        def gain(v):
            return sum(
                1 for e in G.edges
                if (e.source == v and (e.target in present or e.target == v)) or (e.target == v and e.source in present)
            )
        v = max(remaining, key=lambda w: (gain(w), -remaining.index(w)))
        remaining.remove(v)
        present.add(v)
        k, l = target.arity(elements[v])
        x = target.hconcat(x, elements[v])
        ins += [in_at[v][p] for p in range(1, k + 1)]
        outs += [out_at[v][q] for q in range(1, l + 1)]
        # close every edge with both ends now present
        while True:
            pair = next(
                (
                    (ins.index(s) + 1, outs.index(s) + 1)
                    for s in ins
                    if s[0] == "edge" and s in outs
                ),
                None,
            )
            if pair is None:
                break
            i, j = pair
            x = target.partial_trace(x, i, j)
            del ins[i - 1]
            del outs[j - 1]

    # Now only graph inputs/outputs remain; add io wires and route.
    io = sorted(G.io, key=lambda e: e.input_index)
    if io:
        x = target.hconcat(target.identity(len(io)), x)
        ins = [("in", e.input_index) for e in io] + ins
        outs = [("out", e.output_index) for e in io] + outs
    slot_of_input = {s[1]: n for n, s in enumerate(ins, 1)}
    tau = Permutation([slot_of_input[a] for a in range(1, len(ins) + 1)])
    sigma = Permutation([s[1] for s in outs])
    x = target.act(sigma, x, tau)
    if G.loops:
        x = target.hconcat(_power(target, target.loop(), G.loops), x)
    return x


def eval_cut(g, target: TrapTarget, bindings=None, edge: int = 0):
    """``t_{1,1}`` of the naive value of ``g`` with internal edge ``edge`` cut."""
    g = dg.as_decorated(g)
    target, lift = _prepare(target)
    elements = _vertex_elements(g, target, bindings, lift)
    return target.partial_trace(_naive(cut_edge(g.graph, edge), elements, target), 1, 1)


# -- evaluation through the ProP structure -----------------------------------------


def _corolla_value(part: Graph, x, target):
    """``sigma . x . tau`` placing a one-vertex part's indices on x's ports."""
    tau = Permutation([e.port for e in sorted(part.inputs, key=lambda e: e.index)])
    sigma = Permutation([f.port for f in sorted(part.outputs, key=lambda f: f.index)]).inverse
    return target.act(sigma, x, tau)


def _routing_value(G: Graph, target):
    """``sigma . I_k`` for a graph made of io edges only."""
    n = G.n_inputs
    sigma = Permutation([e.output_index for e in sorted(G.io, key=lambda e: e.input_index)])
    return target.act(sigma, target.identity(n), Permutation.identity(n))


def eval_free_prop(g, target: TrapTarget, bindings=None, indecomposable=None, loop_value=None):
    """The value of ``g`` computed through minimal decompositions.

    Single-vertex parts take their bound element; any other part is handed
    to ``indecomposable(part)`` (a decorated graph), which must return its
    value.  Loops take ``loop_value`` (default ``t_{1,1}(I)``).
    """
    g = dg.as_decorated(g)
    target, lift = _prepare(target)
    elements = _vertex_elements(g, target, bindings, lift)
    loop = loop_value if loop_value is not None else None

    def loop_elem():
        return loop if loop is not None else target.loop()

    def phi(G: Graph):
        if not G.vertices:
            x = _routing_value(G, target)
            return target.hconcat(_power(target, loop_elem(), G.loops), x) if G.loops else x
        d = minimal_decomposition(G)
        values = []
        for part, J in zip(d.parts, d.part_vertices):
            if len(part.vertices) == 1 and not part.edges:
                v = part.vertices[0]
                values.append(_corolla_value(part, elements[v], target))
            elif indecomposable is not None:
                decs = tuple(g.decoration(v) for v in part.vertices)
                values.append(indecomposable(type(g)(part, decs)))
            else:
                raise DecompositionError(
                    f"indecomposable part on vertices {sorted(J, key=repr)} has no value; "
                    "pass indecomposable= to evaluate cyclic parts"
                )
        top = target.hconcat(target.hconcat_all(values), target.identity(d.pass_through))
        n_top = target.arity(top)[0]
        top = target.act(d.gamma, top, Permutation.identity(n_top))
        x = compose(target, top, phi(d.remainder))
        if d.loops:
            x = target.hconcat(_power(target, loop_elem(), d.loops), x)
        return x

    return phi(g.graph)
