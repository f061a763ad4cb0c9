"""Exact permanents and determinants of small (0,1)- and integer matrices.

Bit layout, used everywhere a matrix is packed into an integer: entry
``A[i][j]`` is bit ``i*n + j`` of the code, so row ``i`` occupies bits
``i*n .. i*n+n-1`` with column ``j`` at bit ``j`` of that row word.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InvalidInput
from .perms import all_images, sign_table

MAX_BIT_DIM = 16
MAX_INT_ENTRY = 1 << 16


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_BIT_DIM:
            raise InvalidInput(f"BitMatrix dimension must be in 0..{MAX_BIT_DIM}")
        if len(self.rows) != self.n or any(not 0 <= r < (1 << self.n) for r in self.rows):
            raise InvalidInput("row words do not fit an n x n matrix")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        n = len(rows)
        words = []
        for row in rows:
            if len(row) != n or any(v not in (0, 1) for v in row):
                raise InvalidInput("expected a square 0/1 array")
            words.append(sum(1 << j for j, v in enumerate(row) if v))
        return cls(n, tuple(words))

    @classmethod
    def zeros(cls, n: int) -> "BitMatrix":
        return cls(n, (0,) * n)

    @classmethod
    def ones(cls, n: int) -> "BitMatrix":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def code(self) -> int:
        return rank(self)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def to_strings(self) -> list[str]:
        return ["".join(str((r >> j) & 1) for j in range(self.n)) for r in self.rows]

    def to_json(self) -> dict:
        return {"n": self.n, "code": self.code}

    @classmethod
    def from_json(cls, d: dict) -> "BitMatrix":
        return unrank(int(d["code"]), int(d["n"]))

    def permute_rows(self, perm: Sequence[int]) -> "BitMatrix":
        """Row ``i`` of the result is row ``perm[i]`` of ``self`` (0-based)."""
        return BitMatrix(self.n, tuple(self.rows[p] for p in perm))

    def permute_cols(self, perm: Sequence[int]) -> "BitMatrix":
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        n = self.n
        return BitMatrix(
            n,
            tuple(sum(((r >> perm[j]) & 1) << j for j in range(n)) for r in self.rows),
        )


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise InvalidInput("IntMatrix must be square")
        if any(abs(v) > MAX_INT_ENTRY for r in self.entries for v in r):
            raise InvalidInput(f"entries limited to magnitude {MAX_INT_ENTRY}")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def ones(cls, n: int) -> "IntMatrix":
        return cls(tuple((1,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]


Matrix = Union[BitMatrix, IntMatrix]


def _entries(m: Matrix) -> list[list[int]]:
    if isinstance(m, BitMatrix):
        return m.to_lists()
    if isinstance(m, IntMatrix):
        return [list(r) for r in m.entries]
    return [list(r) for r in m]


# ------------------------------------------------------------ codes


def rank(m: BitMatrix) -> int:
    code = 0
    for i, r in enumerate(m.rows):
        code |= r << (i * m.n)
    return code


def unrank(code: int, n: int) -> BitMatrix:
    if n < 0 or n > MAX_BIT_DIM:
        raise InvalidInput(f"dimension must be in 0..{MAX_BIT_DIM}")
    if not 0 <= code < (1 << (n * n)):
        raise InvalidInput(f"code {code} out of range for n={n}")
    mask = (1 << n) - 1
    return BitMatrix(n, tuple((code >> (i * n)) & mask for i in range(n)))


def sigma0(m: BitMatrix) -> int:
    """Number of zero entries."""
    return m.n * m.n - sum(r.bit_count() for r in m.rows)


# ------------------------------------------------------------ permanent


def permanent(m: Matrix) -> int:
    """Ryser's inclusion-exclusion formula, visiting column subsets in Gray-code order.

    per(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij
    """
    a = _entries(m)
    n = len(a)
    if n == 0:
        return 1
    row_sums = [0] * n
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            for i in range(n):
                row_sums[i] += a[i][j]
        else:
            for i in range(n):
                row_sums[i] -= a[i][j]
        prod = 1
        for s in row_sums:
            prod *= s
            if not prod:
                break
        if prod:
            total += -prod if gray.bit_count() & 1 else prod
    return -total if n & 1 else total


def permanent_naive(m: Matrix) -> int:
    """Sum over all n! diagonals."""
    a = _entries(m)
    n = len(a)
    return sum(math.prod(a[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


# ------------------------------------------------------------ determinant


def determinant(m: Matrix) -> int:
    """Fraction-free (Bareiss) elimination with row pivoting."""
    a = _entries(m)
    n = len(a)
    if n == 0:
        return 1
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sgn = -sgn
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sgn * a[n - 1][n - 1]


def determinant_cofactor(m: Matrix) -> int:
    """Laplace expansion along the first row."""
    a = _entries(m)
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in a[1:]]
            total += (-1) ** j * a[0][j] * determinant_cofactor(minor)
    return total


def determinant_leibniz(m: Matrix) -> int:
    a = _entries(m)
    n = len(a)
    signs = sign_table(n)
    return sum(signs[p] * math.prod(a[i][p[i]] for i in range(n)) for p in all_images(n))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def det_mod(m: Matrix, p: int) -> int:
    """Determinant reduced into [0, p), by Gaussian elimination over GF(p)."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    a = [[v % p for v in row] for row in _entries(m)]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return det % p


# ------------------------------------------------------------ row classes


def _row_key(word: int, n: int) -> int:
    # Reads a row as a binary numeral with column 0 as the leading digit.
    return int(format(word, f"0{n}b")[::-1], 2) if n else 0


def row_canonical(m: BitMatrix) -> BitMatrix:
    """Representative of the row-permutation class: rows in non-increasing order,
    comparing rows as binary strings read left to right."""
    return BitMatrix(m.n, tuple(sorted(m.rows, key=lambda w: _row_key(w, m.n), reverse=True)))


def is_canonical(m: BitMatrix) -> bool:
    return row_canonical(m) == m


def has_distinct_rows(m: BitMatrix) -> bool:
    return len(set(m.rows)) == m.n
