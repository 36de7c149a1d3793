"""Dense tensors: linear maps V^{(x)k} -> V^{(x)l} for a d-dimensional V.

A tensor of arity (k, l) stores the coefficient array ``a[J, I]`` with the
l output indices first (slowest) and the k input indices last.  Partial
traces sum an input index against an output index; the horizontal product
is the outer product.  Scalars are either exact rationals (``Fraction``,
in object arrays) or 64-bit floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArityError, ValidationError
from .free_eval import TrapTarget, default_tolerance, derived_compose, generalized_trace
from .perm import Permutation


@dataclass(frozen=True, eq=False)
class DenseTensor:
    k: int
    l: int
    d: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.d,) * (self.k + self.l):
            raise ValidationError(
                f"tensor of arity ({self.k},{self.l}) and d={self.d} needs shape {(self.d,) * (self.k + self.l)}, "
                f"got {self.data.shape}"
            )

    @property
    def arity(self):
        return (self.k, self.l)

    @property
    def exact(self) -> bool:
        return self.data.dtype == object

    @property
    def entries(self) -> list:
        """All coefficients in row-major order (outputs slowest)."""
        return list(self.data.reshape(-1))

    @classmethod
    def from_entries(cls, k, l, d, values, exact=None):
        values = list(values)
        if len(values) != d ** (k + l):
            raise ValidationError(f"tensor {k} {l} {d} needs {d ** (k + l)} entries, got {len(values)}")
        if exact is None:
            exact = all(isinstance(v, (int, Fraction)) for v in values)
        arr = np.empty(len(values), dtype=object if exact else float)
        for n, v in enumerate(values):
            arr[n] = Fraction(v) if exact else float(v)
        return cls(k, l, d, arr.reshape((d,) * (k + l)))

    def matrix(self) -> np.ndarray:
        """The d^l x d^k matrix of the map."""
        return self.data.reshape(self.d**self.l, self.d**self.k)

    def scalar(self):
        if self.k or self.l:
            raise ArityError("not a scalar")
        return self.data[()]

    def __repr__(self):
        return f"DenseTensor(k={self.k}, l={self.l}, d={self.d}, entries={self.entries})"


class TensorTrap(TrapTarget):
    """All tensors over one d-dimensional space."""

    name = "tensor"

    def __init__(self, d: int, exact: bool = True, tol: float | None = None):
        if d < 1:
            raise ValidationError("dimension must be positive")
        self.d = d
        self.exact = exact
        self.tol = default_tolerance() if tol is None else tol

    def _one(self):
        return Fraction(1) if self.exact else 1.0

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def _check(self, x):
        if x.d != self.d:
            raise ArityError(f"tensor has d={x.d}, target has d={self.d}")
        return x

    def tensor(self, k, l, values) -> DenseTensor:
        return DenseTensor.from_entries(k, l, self.d, values, exact=self.exact)

    def from_matrix(self, rows) -> DenseTensor:
        flat = [v for row in rows for v in row]
        return self.tensor(1, 1, flat)

    def scalar(self, c) -> DenseTensor:
        return self.tensor(0, 0, [c])

    def arity(self, x):
        return x.arity

    def unit0(self):
        return self.scalar(self._one())

    def unit1(self):
        return self.identity_map(1)

    def identity_map(self, n: int) -> DenseTensor:
        d = self.d
        eye = np.empty((d, d), dtype=object if self.exact else float)
        for a in range(d):
            for b in range(d):
                eye[a, b] = self._one() if a == b else self._zero()
        out = np.array(self._one(), dtype=eye.dtype)
        for _ in range(n):
            out = np.asarray(np.multiply.outer(out, eye), dtype=eye.dtype)
        # (o1, i1, o2, i2, ...) -> (o1, o2, ..., i1, i2, ...)
        axes = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        return DenseTensor(n, n, d, np.transpose(out, axes) if n else out)

    def identity(self, n: int):
        return self.identity_map(n)

    def hconcat(self, x, y):
        self._check(x), self._check(y)
        prod = np.asarray(np.multiply.outer(x.data, y.data), dtype=x.data.dtype)
        lx, kx, ly = x.l, x.k, y.l
        axes = (
            list(range(lx))
            + list(range(lx + kx, lx + kx + ly))
            + list(range(lx, lx + kx))
            + list(range(lx + kx + ly, prod.ndim))
        )
        return DenseTensor(x.k + y.k, x.l + y.l, self.d, np.transpose(prod, axes))

    def act(self, sigma, x, tau):
        self._check(x)
        if sigma.n != x.l or tau.n != x.k:
            raise ArityError(f"acting with S_{sigma.n} x S_{tau.n} on arity ({x.k},{x.l})")
        si = sigma.inverse
        axes = [si(m) - 1 for m in range(1, x.l + 1)] + [x.l + tau(a) - 1 for a in range(1, x.k + 1)]
        return DenseTensor(x.k, x.l, self.d, np.transpose(x.data, axes))

    def partial_trace(self, x, i, j):
        self._check(x)
        if not (1 <= i <= x.k and 1 <= j <= x.l):
            raise ArityError(f"t_{{{i},{j}}} on arity ({x.k},{x.l})")
        data = np.trace(x.data, axis1=j - 1, axis2=x.l + i - 1)
        return DenseTensor(x.k - 1, x.l - 1, self.d, np.asarray(data, dtype=x.data.dtype))

    def compose(self, q, p):
        return derived_compose(self, q, p)

    def full_trace(self, p):
        return generalized_trace(self, p)

    def add(self, x, y):
        return DenseTensor(x.k, x.l, self.d, x.data + y.data)

    def is_zero(self, x):
        return not np.any(x.data != 0)

    def equal(self, x, y):
        if x.arity != y.arity or x.d != y.d:
            return False
        if x.exact and y.exact:
            return bool(np.all(x.data == y.data))
        a, b = x.data.astype(float), y.data.astype(float)
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
        return bool(np.all(np.abs(a - b) <= self.tol * scale))

    def random(self, rng, k, l, low=-3, high=3) -> DenseTensor:
        """Random entries: small integers when exact, normals otherwise."""
        n = self.d ** (k + l)
        if self.exact:
            vals = [Fraction(int(v)) for v in rng.integers(low, high + 1, size=n)]
        else:
            vals = [float(v) for v in rng.standard_normal(n)]
        return self.tensor(k, l, vals)


def matrix_product(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    """Direct ``a @ b`` of two (1,1) tensors, independent of traces."""
    if a.arity != (1, 1) or b.arity != (1, 1):
        raise ArityError("matrix_product needs (1,1) tensors")
    d = a.d
    out = np.empty((d, d), dtype=a.data.dtype)
    for r in range(d):
        for c in range(d):
            out[r, c] = sum(a.data[r, m] * b.data[m, c] for m in range(d))
    return DenseTensor(1, 1, d, out)


def permutation_tensor(target: TensorTrap, sigma: Permutation) -> DenseTensor:
    """``sigma . I_n`` as a tensor."""
    n = sigma.n
    return target.act(sigma, target.identity_map(n), Permutation.identity(n))
