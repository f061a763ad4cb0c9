"""Permutations of {1..n} in one-line notation.

Composition is right-to-left: ``compose(p, q)(i) == p(q(i))``. Every other
module relies on this convention.

Storage is 0-based (``images[i]`` is the image of ``i``); the public
``mapping`` property and ``str`` use the 1-based notation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import InvalidInput

MAX_ORDER = 16


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n > MAX_ORDER:
            raise InvalidInput(f"permutations are limited to n <= {MAX_ORDER}")
        if sorted(self.images) != list(range(n)):
            raise InvalidInput(f"not a permutation of 0..{n - 1}: {self.images}")

    @classmethod
    def from_one_line(cls, mapping: Sequence[int]) -> "Permutation":
        """Build from 1-based one-line notation, e.g. ``(2, 3, 1)``."""
        return cls(tuple(int(v) - 1 for v in mapping))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def mapping(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.images)

    def __call__(self, i: int) -> int:
        """Image of the 1-based point ``i``."""
        return self.images[i - 1] + 1

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.mapping)) + ")"

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    @property
    def sign(self) -> int:
        return sign(self)


def inversion_sign(images: Sequence[int]) -> int:
    inv = 0
    n = len(images)
    for i in range(n):
        vi = images[i]
        for j in range(i + 1, n):
            if images[j] < vi:
                inv += 1
    return -1 if inv & 1 else 1


def cycle_sign(images: Sequence[int]) -> int:
    # sign = (-1)^(n - #cycles)
    n = len(images)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
    return -1 if (n - cycles) & 1 else 1


def sign(pi: Permutation) -> int:
    return inversion_sign(pi.images)


def compose(pi: Permutation, rho: Permutation) -> Permutation:
    """``i -> pi(rho(i))``."""
    if pi.n != rho.n:
        raise InvalidInput(f"order mismatch: {pi.n} vs {rho.n}")
    return Permutation(tuple(pi.images[r] for r in rho.images))


def inverse(pi: Permutation) -> Permutation:
    out = [0] * pi.n
    for i, v in enumerate(pi.images):
        out[v] = i
    return Permutation(tuple(out))


def cyclic(n: int, k: int = 1) -> Permutation:
    """``nu**k`` where ``nu`` is the n-cycle ``i -> i+1`` (and ``n -> 1``)."""
    if n < 1:
        raise InvalidInput("cyclic permutation needs n >= 1")
    k %= n
    return Permutation(tuple((i + k) % n for i in range(n)))


@lru_cache(maxsize=None)
def all_images(n: int) -> tuple[tuple[int, ...], ...]:
    """All 0-based one-line tuples of Sym(n) in lexicographic order."""
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def sign_table(n: int) -> dict[tuple[int, ...], int]:
    return {p: inversion_sign(p) for p in all_images(n)}


def symmetric_group(n: int) -> Iterator[Permutation]:
    """Sym(n) in lexicographic order of one-line notation."""
    for p in all_images(n):
        yield Permutation(p)


def lex_rank(pi: Permutation) -> int:
    """Position of ``pi`` in the lexicographic listing of Sym(n) (0-based)."""
    remaining = list(range(pi.n))
    rank = 0
    for pos, v in enumerate(pi.images):
        idx = remaining.index(v)
        rank += idx * math.factorial(pi.n - pos - 1)
        remaining.pop(idx)
    return rank


def lex_unrank(n: int, rank: int) -> Permutation:
    return Permutation(all_images(n)[rank])
