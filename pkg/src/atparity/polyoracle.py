"""Square-free polynomials in the n*n cell variables X_ij, and the
coefficient identities read off from them.

A monomial is an n*n-bit mask, bit ``i*n + j`` standing for X_ij. Products
drop every pair of monomials that share a variable: only the coefficient of
the full monomial prod X_ij is ever read, and a repeated variable can never
reach it.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidInput, ResourceCapExceeded
from .exact_matrix import IntMatrix, determinant, permanent
from .perms import all_images, sign_table
from .reports import VerificationReport

MAX_TERMS = 10**7
DEFAULT_MAX_ORDER = 4


@dataclass
class SquareFreePoly:
    n: int
    terms: dict[int, int] = field(default_factory=dict)

    @classmethod
    def one(cls, n: int) -> "SquareFreePoly":
        return cls(n, {0: 1})

    @classmethod
    def zero(cls, n: int) -> "SquareFreePoly":
        return cls(n, {})

    @property
    def full_mask(self) -> int:
        return (1 << (self.n * self.n)) - 1

    def __mul__(self, other: "SquareFreePoly") -> "SquareFreePoly":
        return sf_multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareFreePoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [[m, c] for m, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, d: dict) -> "SquareFreePoly":
        return cls(int(d["n"]), {int(m): int(c) for m, c in d["terms"]})


def matrix_poly(n: int, kind: str) -> SquareFreePoly:
    """per(X) or det(X) as a sum of n! monomials."""
    if kind not in ("permanent", "determinant"):
        raise InvalidInput(f"kind must be permanent or determinant, got {kind!r}")
    if n > 5:
        raise ResourceCapExceeded("matrix polynomials are limited to n <= 5")
    signs = sign_table(n)
    terms = {}
    for p in all_images(n):
        mask = 0
        for i, j in enumerate(p):
            mask |= 1 << (i * n + j)
        terms[mask] = 1 if kind == "permanent" else signs[p]
    return SquareFreePoly(n, terms)


def sf_multiply(P: SquareFreePoly, Q: SquareFreePoly) -> SquareFreePoly:
    if P.n != Q.n:
        raise InvalidInput("polynomials over different variable sets")
    out: dict[int, int] = {}
    for m1, c1 in P.terms.items():
        for m2, c2 in Q.terms.items():
            if m1 & m2:
                continue
            m = m1 | m2
            out[m] = out.get(m, 0) + c1 * c2
    out = {m: c for m, c in out.items() if c}
    if len(out) > MAX_TERMS:
        raise ResourceCapExceeded(f"intermediate product has {len(out)} terms")
    return SquareFreePoly(P.n, dict(sorted(out.items())))


def full_coefficient(P: SquareFreePoly) -> int:
    return P.terms.get(P.full_mask, 0)


MODES = ("per_n", "det_n", "per_det")


def coeff_pipeline(n: int, mode: str, *, extended: bool = False) -> int:
    """Full-monomial coefficient of per(X)^n, det(X)^n, or per(X) det(X)^(n-1).

    Factors are multiplied left to right, permanent first.
    """
    if mode not in MODES:
        raise InvalidInput(f"mode must be one of {MODES}")
    if n < 1:
        raise InvalidInput("order must be >= 1")
    if mode == "per_det" and n % 2 == 0:
        raise InvalidInput("per_det mode is defined for odd n")
    if n > 5 or (n == 5 and not extended):
        raise ResourceCapExceeded(f"coefficient pipeline for n={n} needs extended=True (n <= 5)")
    per, det = matrix_poly(n, "permanent"), matrix_poly(n, "determinant")
    factors = {
        "per_n": [per] * n,
        "det_n": [det] * n,
        "per_det": [per] + [det] * (n - 1),
    }[mode]
    acc = SquareFreePoly.one(n)
    for f in factors:
        acc = sf_multiply(acc, f)
    return full_coefficient(acc)


# ---------------------------------------------------------------- tuple sums


def _tuple_space(n: int):
    """Sign and cell list for every (sigma, rho) in Sym(n)^n x Sym(n)^n with
    rho_1 = id. Cell (i, j) of the product reads row sigma_i(j), column rho_j(i)."""
    perms = all_images(n)
    signs = sign_table(n)
    ident = tuple(range(n))
    rho_tails = list(_product(perms, n - 1))
    for sigma in _product(perms, n):
        s_sign = 1
        for s in sigma[1:]:
            s_sign *= signs[s]  # eps(sigma_1) eps(sigma) = prod over i >= 2
        for tail in rho_tails:
            rho = (ident,) + tail
            r_sign = 1
            for r in tail:
                r_sign *= signs[r]
            yield s_sign * r_sign, sigma, rho


def _product(perms, k):
    if k == 0:
        yield ()
        return
    for head in perms:
        for rest in _product(perms, k - 1):
            yield (head,) + rest


def theorem41_coeff(n: int, *, square_free: bool = True) -> int:
    """Full-monomial coefficient of the signed tuple sum
    sum eps(sigma_1) eps(sigma) eps(rho) prod_{i,j} X[sigma_i(j), rho_j(i)].

    ``square_free=False`` drops the monomial filter and just totals the signs
    (a control: the result then has nothing to do with Latin squares).
    """
    if n % 2 == 0:
        raise InvalidInput("the tuple-sum identity is stated for odd n")
    if n >= 5:
        raise ResourceCapExceeded("(5!)^9 tuple pairs is out of reach; n must be 1 or 3")
    total = 0
    nn = n * n
    full = (1 << nn) - 1
    for sgn, sigma, rho in _tuple_space(n):
        if not square_free:
            total += sgn
            continue
        mask = 0
        ok = True
        for j in range(n):
            rj = rho[j]
            for i in range(n):
                bit = 1 << (sigma[i][j] * n + rj[i])
                if mask & bit:
                    ok = False
                    break
                mask |= bit
            if not ok:
                break
        if ok and mask == full:
            total += sgn
    return total


def prop42_lhs(matrices: Sequence[IntMatrix]) -> int:
    n = len(matrices)
    if n % 2 == 0:
        raise InvalidInput("the tuple-sum identity needs odd n")
    if any(A.n != n for A in matrices):
        raise InvalidInput("need n matrices of order n")
    if n >= 5:
        raise ResourceCapExceeded("tuple sum only feasible for n <= 3")
    ent = [A.entries for A in matrices]
    total = 0
    for sgn, sigma, rho in _tuple_space(n):
        prod = sgn
        for j in range(n):
            Aj = ent[j]
            rj = rho[j]
            for i in range(n):
                prod *= Aj[sigma[i][j]][rj[i]]
                if not prod:
                    break
            if not prod:
                break
        total += prod
    return total


def prop42_check(
    matrices: Sequence[IntMatrix], *, r_diff: int | None = None, label: str = "custom"
) -> VerificationReport:
    """Tuple sum vs (n-1)! (R^E - R^O) per(A_1) prod_{j>=2} det(A_j).

    ``r_diff`` defaults to the enumerated reduced-square difference.
    """
    t0 = time.perf_counter()
    n = len(matrices)
    if n % 2 == 0:
        raise InvalidInput("the tuple-sum identity needs odd n")
    if r_diff is None:
        from .latin import count_summary

        r_diff = count_summary(n).r_diff
    lhs = prop42_lhs(matrices)
    rhs = math.factorial(n - 1) * r_diff * permanent(matrices[0])
    for A in matrices[1:]:
        rhs *= determinant(A)
    rep = VerificationReport(
        task="prop42",
        params={"n": n, "matrices": label},
        computed={"lhs": lhs},
        expected={"lhs": rhs},
        provenance={"lhs": "derived"},
        notes=[f"R^E - R^O = {r_diff} from enumeration"],
    ).finalize()
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000
    return rep


def random_int_matrices(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> list[IntMatrix]:
    return [
        IntMatrix.of([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]) for _ in range(n)
    ]


def prop42_trials(n: int = 3, trials: int = 100, seed: int = 0) -> VerificationReport:
    """Identity, all-ones, and ``trials`` seeded random integer tuples."""
    from .latin import count_summary

    t0 = time.perf_counter()
    r_diff = count_summary(n).r_diff
    rng = random.Random(seed)
    cases = [("identity", [IntMatrix.identity(n)] * n), ("all-ones", [IntMatrix.ones(n)] * n)]
    cases += [(f"random#{t}", random_int_matrices(n, rng)) for t in range(trials)]
    mismatches = []
    details = []
    for label, mats in cases:
        rep = prop42_check(mats, r_diff=r_diff, label=label)
        details.append({"case": label, "lhs": rep.computed["lhs"], "rhs": rep.expected["lhs"]})
        if rep.status != "pass":
            mismatches.append(label)
    computed = {
        "identity_lhs": details[0]["lhs"],
        "all_ones_lhs": details[1]["lhs"],
        "mismatches": len(mismatches),
    }
    rep = VerificationReport(
        task="prop42",
        params={"n": n, "trials": trials, "seed": seed},
        computed=computed,
        expected={"identity_lhs": details[0]["rhs"], "all_ones_lhs": details[1]["rhs"], "mismatches": 0},
        provenance={"identity_lhs": "derived", "all_ones_lhs": "derived", "mismatches": "derived"},
        details=details,
        notes=[f"mismatched cases: {mismatches}"] if mismatches else [],
    ).finalize()
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000
    return rep
