"""Exhaustive signed sums over all n x n (0,1)-matrices.

Work is cut into contiguous code ranges of ``CHUNK`` matrices, handed to a
thread pool (the compiled kernels release the GIL) and folded with Python
integers in range order, so the result does not depend on the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import _kernels
from .errors import DivisibilityError, InvalidInput, OverflowGuard, ResourceCapExceeded
from .exact_matrix import is_prime

CHUNK = 1 << 16
INT64_SAFE = (1 << 62)

# Largest |det| of an n x n (0,1)-matrix, n = 0..6.
MAX_01_DET = (1, 1, 1, 2, 3, 5, 9)

DEFAULT_MAX_ORDER = 4  # n = 5 (2**25 matrices) needs extended=True


@dataclass
class SumResult:
    task: str
    n: int
    raw_sum: int
    scaled_value: Fraction
    residue_mod_p: int | None = None
    term_count: int = 0
    evaluated: int = 0
    elapsed_ms: float = 0.0
    threads: int = 1
    extras: dict[str, Any] = field(default_factory=dict)

    def to_json(self, *, timing: bool = True) -> dict[str, Any]:
        d = {
            "task": self.task,
            "n": self.n,
            "raw_sum": str(self.raw_sum),
            "scaled_value": [str(self.scaled_value.numerator), str(self.scaled_value.denominator)],
            "residue_mod_p": self.residue_mod_p,
            "term_count": self.term_count,
            "threads": self.threads,
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        for k, v in self.extras.items():
            d[k] = str(v) if isinstance(v, int) and not isinstance(v, bool) else v
        return d


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise DivisibilityError(f"{what}: {num} is not divisible by {den}")
    return q


def _fan_out(fn: Callable, jobs: Sequence[tuple], threads: int) -> list:
    threads = max(1, int(threads))
    if threads == 1 or len(jobs) == 1:
        return [fn(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda j: fn(*j), jobs))


def _check_order(n: int, extended: bool) -> None:
    if n < 1:
        raise InvalidInput("order must be >= 1")
    if n >= 6:
        raise ResourceCapExceeded(f"2**{n * n} matrices is out of reach for exhaustive summation")
    if n == 5 and not extended:
        raise ResourceCapExceeded("n = 5 (2**25 matrices) requires extended=True")


def _alternating(n: int, mode: int, threads: int, prune: bool, chunk: int) -> tuple[int, int]:
    size = 1 << (n * n)
    jobs = [(n, lo, min(lo + chunk, size), mode, prune) for lo in range(0, size, chunk)]
    total = 0
    evaluated = 0
    for (lo_n, lo, hi, _m, _p), (s, ev, max_det, max_per) in zip(
        jobs, _fan_out(_kernels.alternating_range, jobs, threads)
    ):
        if max_det > MAX_01_DET[n] or max_per > math.factorial(n):
            raise OverflowGuard(f"kernel bound violated in codes [{lo}, {hi})")
        # every term is bounded by n! * maxdet^n, so the int64 partial is exact
        if (hi - lo) * math.factorial(n) * MAX_01_DET[n] ** n >= INT64_SAFE:
            raise OverflowGuard("chunk too large for exact int64 accumulation")
        total += int(s)
        evaluated += int(ev)
    return total, evaluated


def det_power_sum(
    n: int, *, threads: int = 1, extended: bool = False, prune: bool = True, chunk: int = CHUNK
) -> SumResult:
    """sum over A of (-1)^sigma0(A) det(A)^n; scaled by (-1)^(n(n-1)/2) it is
    the even-minus-odd Latin square count."""
    _check_order(n, extended)
    t0 = time.perf_counter()
    raw, ev = _alternating(n, _kernels.MODE_DET_POWER, threads, prune, chunk)
    sgn = -1 if (n * (n - 1) // 2) & 1 else 1
    return SumResult(
        task="det_power_sum",
        n=n,
        raw_sum=raw,
        scaled_value=Fraction(sgn * raw),
        term_count=1 << (n * n),
        evaluated=ev,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        threads=threads,
    )


def per_det_sum(
    n: int, *, threads: int = 1, extended: bool = False, prune: bool = True, chunk: int = CHUNK
) -> SumResult:
    """sum over A of (-1)^sigma0(A) per(A) det(A)^(n-1), odd n.

    ``scaled_value`` is AT(n) = (-1)^(n(n-1)/2) raw / (n! (n-1)!).
    """
    if n % 2 == 0:
        raise InvalidInput("the permanent-determinant sum is defined here for odd n")
    _check_order(n, extended)
    t0 = time.perf_counter()
    raw, ev = _alternating(n, _kernels.MODE_PER_DET, threads, prune, chunk)
    sgn = -1 if (n * (n - 1) // 2) & 1 else 1
    den = math.factorial(n) * math.factorial(n - 1)
    at = _exact_div(sgn * raw, den, "AT(n) scaling")
    return SumResult(
        task="per_det_sum",
        n=n,
        raw_sum=raw,
        scaled_value=Fraction(at),
        term_count=1 << (n * n),
        evaluated=ev,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        threads=threads,
        extras={"denominator": den},
    )


def shifted_fixed_sum(p: int) -> int:
    """The same signed per*det^(p-1) sum restricted to the k-left row shifted
    matrices. Orbits of the cyclic row/column action off that set have size
    p**2, so the full sum agrees with this one modulo p**2."""
    from .exact_matrix import determinant, permanent, sigma0
    from .shifted import shifted_set

    total = 0
    for A in shifted_set(p):
        term = permanent(A) * determinant(A) ** (p - 1)
        total += -term if sigma0(A) & 1 else term
    return total


def drisko_residue(p: int, *, threads: int = 1, extended: bool = False) -> SumResult:
    """(S/p) mod p for S = the per*det^(p-1) alternating sum over p x p matrices.

    The statement in print says -1 mod p. Recomputing the parity of the zero
    count of a shifted matrix (p(p-|b|), which has the parity of |b|+1) flips
    that to +1, and the exhaustive sum agrees. Both are carried in ``extras``.
    """
    if p not in (3, 5):
        raise InvalidInput("residue check supports p in {3, 5}")
    t0 = time.perf_counter()
    base = per_det_sum(p, threads=threads, extended=extended)
    S = base.raw_sum
    q = _exact_div(S, p, "p | S")
    residue = q % p
    d_sum = shifted_fixed_sum(p)
    return SumResult(
        task="drisko_residue",
        n=p,
        raw_sum=S,
        scaled_value=Fraction(q),
        residue_mod_p=residue,
        term_count=base.term_count,
        evaluated=base.evaluated,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        threads=threads,
        extras={
            "printed_residue": (-1) % p,
            "derived_residue": 1 % p,
            "shifted_sum": d_sum,
            "raw_mod_p2": S % (p * p),
            "shifted_sum_mod_p2": d_sum % (p * p),
        },
    )


def class_permanent_sum(p: int, *, threads: int = 1, extended: bool = False) -> SumResult:
    """sum of (-1)^sigma0(A) per(A) over one matrix per row-permutation class,
    keeping only det(A) != 0 mod p. Only distinct-row classes can qualify."""
    if not is_prime(p) or p == 2:
        raise InvalidInput(f"{p} is not an odd prime")
    if p > 7:
        raise ResourceCapExceeded("row-class sum supports p <= 7")
    if p == 7 and not extended:
        raise ResourceCapExceeded("p = 7 visits C(128, 7) ~ 2.3e10 classes; requires extended=True")
    t0 = time.perf_counter()
    nwords = 1 << p
    last_first = nwords - p + 1
    jobs = [(p, f, f + 1) for f in range(0, last_first)]
    total = visited = kept = 0
    for s, v, k in _fan_out(_kernels.class_range, jobs, threads):
        total += int(s)
        visited += int(v)
        kept += int(k)
    if visited != math.comb(nwords, p):
        raise DivisibilityError(f"visited {visited} classes, expected C({nwords},{p})")
    return SumResult(
        task="class_permanent_sum",
        n=p,
        raw_sum=total,
        scaled_value=Fraction(total),
        residue_mod_p=total % p,
        term_count=visited,
        evaluated=kept,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        threads=threads,
    )
