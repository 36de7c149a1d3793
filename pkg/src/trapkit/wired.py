"""Elements made of formal unit wires next to a concrete body.

Some targets have a unit that cannot be stored as data: the delta kernel
on a continuum, or the identity of an infinite-dimensional space.  Such a
unit is kept as a *wire* joining an input slot straight to an output slot,
and everything else lives in a *body* whose axes are the remaining free
slots: free outputs in increasing order, then free inputs in increasing
order.

Tracing follows the unit rules.  Two body slots contract in the body.  A
wire traced against a body slot renames that body axis to the wire's other
end.  Two different wires merge into one.  A wire traced against itself
has no value and raises :class:`PartialTraceUndefined`; completion turns
it into a loop.

Subclasses supply the body algebra through a handful of hooks.
"""

from __future__ import annotations

from abc import abstractmethod
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError, PartialTraceUndefined, TrapkitError
from .free_eval import TrapTarget


@dataclass(frozen=True)
class WiredElement:
    k: int
    l: int
    wires: tuple  # sorted ((input slot, output slot), ...)
    body: object

    @property
    def arity(self):
        return (self.k, self.l)

    @property
    def free_outputs(self):
        wired = {b for _, b in self.wires}
        return tuple(j for j in range(1, self.l + 1) if j not in wired)

    @property
    def free_inputs(self):
        wired = {a for a, _ in self.wires}
        return tuple(i for i in range(1, self.k + 1) if i not in wired)


def _argsort(labels):
    return sorted(range(len(labels)), key=labels.__getitem__)


class WiredTrap(TrapTarget):
    """Generic wire bookkeeping; the body algebra is left to subclasses."""

    quasi = True

    # -- body hooks ------------------------------------------------------------
    @abstractmethod
    def body_unit(self): ...

    @abstractmethod
    def body_outer(self, a, a_out: int, b, b_out: int):
        """Product with axes ordered (a outs, b outs, a ins, b ins)."""

    @abstractmethod
    def body_permute(self, body, axes):
        """Axis m of the result is axis ``axes[m]`` of ``body``."""

    @abstractmethod
    def body_contract(self, body, axis1: int, axis2: int): ...

    @abstractmethod
    def body_equal(self, a, b) -> bool: ...

    @abstractmethod
    def body_is_zero(self, a) -> bool: ...

    def body_is_negligible(self, a) -> bool:
        """Zero up to the target's tolerance."""
        return self.body_is_zero(a)

    def body_add(self, a, b):
        raise TrapkitError(f"{self.name} has no addition")

    def make(self, k, l, wires, body) -> WiredElement:
        return WiredElement(k, l, tuple(sorted(wires)), body)

    # -- the target operations -------------------------------------------------
    def arity(self, x):
        return x.arity

    def unit0(self):
        return self.make(0, 0, (), self.body_unit())

    def unit1(self):
        return self.make(1, 1, ((1, 1),), self.body_unit())

    def hconcat(self, x, y):
        wires = list(x.wires) + [(a + x.k, b + x.l) for a, b in y.wires]
        body = self.body_outer(x.body, len(x.free_outputs), y.body, len(y.free_outputs))
        return self.make(x.k + y.k, x.l + y.l, wires, body)

    def _relabelled(self, k, l, wires, outs, ins, body):
        """Sort body axes so their slot labels increase."""
        po, pi = _argsort(outs), _argsort(ins)
        axes = po + [len(outs) + m for m in pi]
        if axes != list(range(len(axes))):
            body = self.body_permute(body, axes)
        return self.make(k, l, wires, body)

    def act(self, sigma, x, tau):
        if sigma.n != x.l or tau.n != x.k:
            raise ArityError(f"acting with S_{sigma.n} x S_{tau.n} on arity ({x.k},{x.l})")
        ti = tau.inverse
        wires = [(ti(a), sigma(b)) for a, b in x.wires]
        outs = [sigma(j) for j in x.free_outputs]
        ins = [ti(i) for i in x.free_inputs]
        return self._relabelled(x.k, x.l, wires, outs, ins, x.body)

    def partial_trace(self, x, i, j):
        if not (1 <= i <= x.k and 1 <= j <= x.l):
            raise ArityError(f"t_{{{i},{j}}} on arity ({x.k},{x.l})")
        wires = list(x.wires)
        outs, ins = list(x.free_outputs), list(x.free_inputs)
        w_in = next((w for w in wires if w[0] == i), None)
        w_out = next((w for w in wires if w[1] == j), None)
        body = x.body
        if w_in is None and w_out is None:
            a, b = outs.index(j), ins.index(i)
            body = self.body_contract(body, a, len(outs) + b)
            del outs[a]
            del ins[b]
        elif w_in is not None and w_in == w_out:
            raise PartialTraceUndefined(f"t_{{{i},{j}}} closes a unit wire on itself")
        elif w_in is not None and w_out is not None:
            wires.remove(w_in)
            wires.remove(w_out)
            wires.append((w_out[0], w_in[1]))
        elif w_in is not None:
            wires.remove(w_in)
            outs[outs.index(j)] = w_in[1]
        else:
            wires.remove(w_out)
            ins[ins.index(i)] = w_out[0]

        def down(n, gone):
            return n - 1 if n > gone else n

        wires = [(down(a, i), down(b, j)) for a, b in wires]
        outs = [down(b, j) for b in outs]
        ins = [down(a, i) for a in ins]
        return self._relabelled(x.k - 1, x.l - 1, wires, outs, ins, body)

    def remove_identity_wire(self, x, i, j):
        if (i, j) not in x.wires:
            return None
        wires = [w for w in x.wires if w != (i, j)]
        wires = [(a - (a > i), b - (b > j)) for a, b in wires]
        return self.make(x.k - 1, x.l - 1, wires, x.body)

    def is_zero(self, x):
        return self.body_is_zero(x.body)

    def equal(self, x, y):
        if x.arity != y.arity:
            return False
        if x.wires == y.wires:
            return self.body_equal(x.body, y.body)
        return self.body_is_negligible(x.body) and self.body_is_negligible(y.body)

    def add(self, x, y):
        if x.arity != y.arity:
            raise ArityError("adding elements of different arities")
        if self.body_is_zero(x.body):
            return y
        if self.body_is_zero(y.body):
            return x
        if x.wires != y.wires:
            raise TrapkitError("sums of elements with different unit wiring are not represented")
        return self.make(x.k, x.l, x.wires, self.body_add(x.body, y.body))


class FiniteSupportTrap(WiredTrap):
    """Endomorphisms of the polynomial space K[X] spanned by the maps
    ``f(i, j): X^i -> X^j`` (other monomials to 0) and the identity.

    A body is a dict from value tuples (free outputs, then free inputs) to
    coefficients; ``f(i, j)`` is ``{(j, i): 1}`` at arity (1,1).  The
    identity of K[X] is infinite-dimensional, so it only exists as a wire
    and its trace is undefined.
    """

    name = "finite-support"

    def f(self, i: int, j: int) -> WiredElement:
        return self.make(1, 1, (), {(j, i): Fraction(1)})

    def identity_map(self) -> WiredElement:
        return self.unit1()

    def scalar(self, c) -> WiredElement:
        return self.make(0, 0, (), {(): Fraction(c)} if c else {})

    def body_unit(self):
        return {(): Fraction(1)}

    def body_outer(self, a, a_out, b, b_out):
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                key = ka[:a_out] + kb[:b_out] + ka[a_out:] + kb[b_out:]
                out[key] = out.get(key, 0) + ca * cb
        return {k: c for k, c in out.items() if c != 0}

    def body_permute(self, body, axes):
        return {tuple(key[m] for m in axes): c for key, c in body.items()}

    def body_contract(self, body, axis1, axis2):
        out = {}
        for key, c in body.items():
            if key[axis1] == key[axis2]:
                rest = tuple(v for m, v in enumerate(key) if m not in (axis1, axis2))
                out[rest] = out.get(rest, 0) + c
        return {k: c for k, c in out.items() if c != 0}

    def body_equal(self, a, b):
        return a == b

    def body_is_zero(self, a):
        return not a

    def body_add(self, a, b):
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c != 0}
