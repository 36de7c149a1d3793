"""Smoothing kernels on the circle, sampled on a uniform grid.

A kernel of arity (k, l) is a function K(y_1..y_l, x_1..x_k) on the
(k+l)-torus; it is stored by its values at the grid points 2*pi*m/N, with
the y variables (outputs) as the leading axes.  Gluing input i to output
j integrates the shared variable with the trapezoid rule, weight 2*pi/N,
which is exact for trigonometric polynomials of degree below N/2.

The delta kernel is the unit.  It has no samples and is carried as a
formal wire (see :mod:`trapkit.wired`); its trace against itself is
undefined, so evaluation runs in the completion where it becomes a loop.
"""

from __future__ import annotations

import ast
import math

import numpy as np

from .errors import ArityError, ValidationError
from .free_eval import CompletedElement, default_tolerance, eval_free_trap
from .wired import WiredElement, WiredTrap


class GridKernel(WiredElement):
    """A sampled kernel, possibly next to formal delta wires."""

    def __init__(self, k, l, wires, body, N):
        super().__init__(k, l, wires, body)
        object.__setattr__(self, "N", N)

    @property
    def is_delta(self) -> bool:
        return self.arity == (1, 1) and self.wires == ((1, 1),)

    @property
    def samples(self) -> np.ndarray:
        if self.wires:
            raise ValidationError("a kernel with formal delta factors has no samples")
        return self.body

    def __repr__(self):
        return f"GridKernel(k={self.k}, l={self.l}, N={self.N}, wires={self.wires})"


def grid(N: int) -> np.ndarray:
    return 2 * math.pi * np.arange(N) / N


class KernelTrap(WiredTrap):
    """Grid kernels at a fixed resolution N."""

    name = "kernel"
    exact = False

    def __init__(self, N: int, tol: float | None = None):
        if N < 1:
            raise ValidationError("grid size must be positive")
        self.N = N
        self.weight = 2 * math.pi / N
        self.tol = default_tolerance() if tol is None else tol

    def make(self, k, l, wires, body):
        return GridKernel(k, l, tuple(sorted(wires)), body, self.N)

    # -- constructors ------------------------------------------------------------
    def from_samples(self, k, l, values) -> GridKernel:
        arr = np.asarray(values, dtype=float)
        if arr.size != self.N ** (k + l):
            raise ValidationError(f"kernel {k} {l} {self.N} needs {self.N ** (k + l)} samples, got {arr.size}")
        return self.make(k, l, (), arr.reshape((self.N,) * (k + l)))

    def from_function(self, k, l, fn) -> GridKernel:
        """Sample ``fn(ys, xs)``; ``ys`` and ``xs`` are lists of broadcast grids."""
        axes = np.meshgrid(*([grid(self.N)] * (k + l)), indexing="ij") if k + l else []
        ys, xs = list(axes[:l]), list(axes[l:])
        values = np.broadcast_to(np.asarray(fn(ys, xs), dtype=float), (self.N,) * (k + l))
        return self.make(k, l, (), np.array(values))

    def from_expr(self, k, l, text: str) -> GridKernel:
        expr = parse_kernel_expr(text, k, l)
        return self.from_function(k, l, lambda ys, xs: expr(ys, xs))

    def delta(self) -> GridKernel:
        return self.unit1()

    # -- body algebra ---------------------------------------------------------------
    def body_unit(self):
        return np.array(1.0)

    def body_outer(self, a, a_out, b, b_out):
        prod = np.asarray(np.multiply.outer(a, b))
        na, nb = a.ndim, b.ndim
        axes = (
            list(range(a_out))
            + list(range(na, na + b_out))
            + list(range(a_out, na))
            + list(range(na + b_out, na + nb))
        )
        return np.transpose(prod, axes)

    def body_permute(self, body, axes):
        return np.transpose(body, axes)

    def body_contract(self, body, axis1, axis2):
        return np.asarray(np.trace(body, axis1=axis1, axis2=axis2) * self.weight)

    def body_equal(self, a, b):
        if a.shape != b.shape:
            return False
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
        return bool(np.all(np.abs(a - b) <= self.tol * scale))

    def body_is_zero(self, a):
        return not np.any(a)

    def body_is_negligible(self, a):
        return float(np.max(np.abs(a), initial=0.0)) <= self.tol

    def body_add(self, a, b):
        return a + b

    def hconcat(self, x, y):
        if getattr(x, "N", self.N) != self.N or getattr(y, "N", self.N) != self.N:
            raise ArityError("kernels on different grids")
        return super().hconcat(x, y)

    def random(self, rng, k, l, degree: int = 2) -> GridKernel:
        """A random real trigonometric polynomial of the given degree in
        each variable (band-limited, so quadrature is exact)."""
        n = k + l
        freqs = [tuple(int(f) for f in rng.integers(-degree, degree + 1, size=n)) for _ in range(3)]
        coeffs = [complex(*rng.standard_normal(2)) for _ in freqs]

        def fn(ys, xs):
            vs = ys + xs
            total = np.zeros((self.N,) * n) if n else 0.0
            for c, f in zip(coeffs, freqs):
                phase = sum((fi * v for fi, v in zip(f, vs)), 0.0)
                total = total + (c * np.exp(1j * phase)).real
            return total

        return self.from_function(k, l, fn)


def generalized_convolution(g, N: int = 64, bindings=None, strategy="scheduled") -> CompletedElement:
    """The value of a kernel-decorated graph, in the completed kernel target."""
    return eval_free_trap(g, KernelTrap(N), bindings, strategy=strategy)


# -- the kernel expression grammar ---------------------------------------------------

_FUNCS = {"sin": np.sin, "cos": np.cos}


def parse_kernel_expr(text: str, k: int, l: int):
    """Compile sums and products of sin/cos of linear combinations of the
    variables ``x1..xk`` (inputs) and ``y1..yl`` (outputs), ``pi`` and
    numbers.  Returns ``f(ys, xs)``."""
    text = text.replace("−", "-").strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValidationError(f"cannot parse kernel expression {text!r}: {exc.msg}") from None

    def check(node):
        if isinstance(node, ast.Expression):
            return check(node.body)
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            check(node.left)
            check(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            check(node.operand)
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
                raise ValidationError(f"only sin(.) and cos(.) may be called in {text!r}")
            check(node.args[0])
        elif isinstance(node, ast.Name):
            name = node.id
            if name == "pi":
                return
            if name[:1] in "xy" and name[1:].isdigit():
                idx = int(name[1:])
                bound = k if name[0] == "x" else l
                if 1 <= idx <= bound:
                    return
            raise ValidationError(f"unknown variable {name!r} in kernel of arity ({k},{l})")
        elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return
        else:
            raise ValidationError(f"unsupported syntax {type(node).__name__} in {text!r}")

    check(tree)
    code = compile(tree, "<kernel>", "eval")

    def evaluate(ys, xs):
        env = {"pi": math.pi, **_FUNCS}
        env.update({f"y{j + 1}": v for j, v in enumerate(ys)})
        env.update({f"x{i + 1}": v for i, v in enumerate(xs)})
        return eval(code, {"__builtins__": {}}, env)

    return evaluate
