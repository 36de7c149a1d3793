"""Finite permutations in one-line word notation, 1-based.

Besides the group law this module provides the three gadgets the ProP and
TraP axioms are written with: block sums, interchange permutations and the
deletion of a point.
"""

from __future__ import annotations

import itertools
from functools import cached_property

from .errors import ArityError


class Permutation:
    """A bijection of [n] stored as its one-line word ``(p(1), ..., p(n))``."""

    def __init__(self, word=()):
        word = tuple(int(w) for w in word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{word!r} is not a permutation word of [1..{len(word)}]")
        self.word = word

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Read ``"perm 3 1 4 2"``, ``"3 1 4 2"`` or ``"3,1,4,2"``."""
        tokens = text.replace(",", " ").split()
        if tokens and tokens[0] == "perm":
            tokens = tokens[1:]
        return cls(int(t) for t in tokens)

    @classmethod
    def cycle(cls, n: int, points) -> "Permutation":
        """The cycle ``points[0] -> points[1] -> ... -> points[0]`` inside S_n."""
        points = list(points)
        images = list(range(1, n + 1))
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b
        return cls(images)

    @property
    def n(self) -> int:
        return len(self.word)

    def __len__(self):
        return len(self.word)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.word):
            raise IndexError(f"{i} outside [1..{len(self.word)}]")
        return self.word[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __lt__(self, other):
        return (self.n, self.word) < (other.n, other.word)

    def __repr__(self):
        return f"Permutation({''.join(map(str, self.word)) if self.n < 10 else self.word})"

    def __str__(self):
        return " ".join(map(str, self.word))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    @cached_property
    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, w in enumerate(self.word, 1):
            inv[w - 1] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(w == i for i, w in enumerate(self.word, 1))

    def apply_to(self, seq):
        """Move the entry at position i to position p(i)."""
        seq = list(seq)
        if len(seq) != self.n:
            raise ArityError(f"sequence of length {len(seq)} for a permutation of {self.n}")
        out = [None] * self.n
        for i, w in enumerate(self.word):
            out[w - 1] = seq[i]
        return out


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``(a b)(i) = a(b(i))``."""
    if a.n != b.n:
        raise ArityError(f"cannot compose permutations of sizes {a.n} and {b.n}")
    return Permutation(a.word[w - 1] for w in b.word)


def inverse(a: Permutation) -> Permutation:
    return a.inverse


def block_sum(a: Permutation, b: Permutation) -> Permutation:
    """``a`` on the first m points and ``b`` shifted by m on the rest."""
    return Permutation(a.word + tuple(w + a.n for w in b.word))


def interchange(m: int, n: int) -> Permutation:
    """The block swap ``c_{m,n}``: i -> i+n for i <= m, i -> i-m otherwise."""
    return Permutation([i + n for i in range(1, m + 1)] + [i - m for i in range(m + 1, m + n + 1)])


def delete_point(a: Permutation, p: int) -> Permutation:
    """Drop the letter p from the word and close the gap above it."""
    if not 1 <= p <= a.n:
        raise IndexError(f"point {p} outside [1..{a.n}]")
    return Permutation(w - (w > p) for w in a.word if w != p)


def delete_point_by_cases(a: Permutation, p: int) -> Permutation:
    """Same as :func:`delete_point`, evaluated position by position.

    Positions before the removed letter keep their image; later positions
    read the image of their right neighbour. The comparison with p is made
    on the image actually returned, i.e. on a(k+1) in the shifted cases.
    """
    if not 1 <= p <= a.n:
        raise IndexError(f"point {p} outside [1..{a.n}]")
    cut = a.inverse(p)
    word = []
    for k in range(1, a.n):
        image = a(k) if k < cut else a(k + 1)
        word.append(image if image < p else image - 1)
    return Permutation(word)


def delete_position(a: Permutation, i: int) -> Permutation:
    """Drop position i (and its letter a(i)) from the word.

    This is the bookkeeping needed for a permutation acting on the right:
    it equals ``delete_point(a.inverse, i).inverse``.
    """
    return delete_point(a.inverse, i).inverse


def all_permutations(n: int):
    for word in itertools.permutations(range(1, n + 1)):
        yield Permutation(word)


def random_permutation(rng, n: int) -> Permutation:
    return Permutation(rng.permutation(n) + 1)
