"""Compiled inner loops for the exhaustive sums over (0,1)-matrices.

Matrices arrive as packed codes (see ``exact_matrix``). All arithmetic is
int64; callers bound every partial sum before trusting it (n <= 6 keeps each
term below 720 * 6**5).
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_DET_POWER = 0  # (-1)^sigma0 det^n
MODE_PER_DET = 1  # (-1)^sigma0 per det^(n-1)


@njit(cache=True, nogil=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True, nogil=True)
def _bareiss(a, n):
    # a is clobbered
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            piv = -1
            for r in range(k + 1, n):
                if a[r, k] != 0:
                    piv = r
                    break
            if piv < 0:
                return 0
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = t
            sgn = -sgn
        akk = a[k, k]
        for i in range(k + 1, n):
            aik = a[i, k]
            for j in range(k + 1, n):
                a[i, j] = (a[i, j] * akk - aik * a[k, j]) // prev
        prev = akk
    return sgn * a[n - 1, n - 1]


@njit(cache=True, nogil=True)
def _ryser_bits(rows, n, sums):
    # Gray-code Ryser on row bitmasks; sums is scratch of length n
    for i in range(n):
        sums[i] = 0
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        j = 0
        while not (k >> j) & 1:
            j += 1
        gray ^= 1 << j
        delta = 1 if (gray >> j) & 1 else -1
        prod = 1
        for i in range(n):
            if (rows[i] >> j) & 1:
                sums[i] += delta
            prod *= sums[i]
        if _popcount(gray) & 1:
            total -= prod
        else:
            total += prod
    return -total if n & 1 else total


@njit(cache=True, nogil=True)
def _det_mod_bits(rows, n, p, a):
    for i in range(n):
        for j in range(n):
            a[i, j] = (rows[i] >> j) & 1
    det = 1
    for k in range(n):
        piv = -1
        for r in range(k, n):
            if a[r, k] % p != 0:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != k:
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = t
            det = -det
        akk = a[k, k] % p
        det = (det * akk) % p
        # inverse by Fermat
        inv = 1
        base = akk
        e = p - 2
        while e:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for i in range(k + 1, n):
            f = (a[i, k] * inv) % p
            if f:
                for j in range(n):
                    a[i, j] = (a[i, j] - f * a[k, j]) % p
    return det % p


@njit(cache=True, nogil=True)
def alternating_range(n, lo, hi, mode, prune):
    """Sum of the mode's signed term over codes in [lo, hi).

    Returns (sum, terms evaluated, max |det| seen, max |per| seen).
    """
    rows = np.zeros(n, dtype=np.int64)
    a = np.zeros((n, n), dtype=np.int64)
    sums = np.zeros(n, dtype=np.int64)
    full = (1 << n) - 1
    rmask = full
    nn = n * n
    total = 0
    evaluated = 0
    max_det = 0
    max_per = 0
    for code in range(lo, hi):
        color = 0
        zero_row = False
        for i in range(n):
            r = (code >> (i * n)) & rmask
            rows[i] = r
            color |= r
            if r == 0:
                zero_row = True
        if prune and (zero_row or color != full):
            continue
        for i in range(n):
            for j in range(n):
                a[i, j] = (rows[i] >> j) & 1
        det = _bareiss(a, n)
        if det < 0 and -det > max_det:
            max_det = -det
        elif det > max_det:
            max_det = det
        if mode == MODE_DET_POWER:
            if prune and det == 0:
                continue
            term = 1
            for _ in range(n):
                term *= det
        else:
            if prune and det == 0 and n > 1:
                continue
            per = _ryser_bits(rows, n, sums)
            if per > max_per:
                max_per = per
            term = per
            for _ in range(n - 1):
                term *= det
        evaluated += 1
        if (nn - _popcount(code)) & 1:
            total -= term
        else:
            total += term
    return total, evaluated, max_det, max_per


@njit(cache=True, nogil=True)
def class_range(p, first_lo, first_hi):
    """Row-class sum of (-1)^sigma0 per over sets of p distinct rows whose
    smallest row word lies in [first_lo, first_hi), keeping det != 0 mod p.

    Rows are taken in increasing word order; any fixed order gives one
    representative per class. Returns (exact sum, classes visited, classes kept).
    """
    rows = np.zeros(p, dtype=np.int64)
    a = np.zeros((p, p), dtype=np.int64)
    sums = np.zeros(p, dtype=np.int64)
    nwords = 1 << p
    idx = np.zeros(p, dtype=np.int64)
    total = 0
    visited = 0
    kept = 0
    pp = p * p
    for first in range(first_lo, first_hi):
        if first + p > nwords:
            break
        idx[0] = first
        for t in range(1, p):
            idx[t] = first + t
        while True:
            visited += 1
            ones = 0
            for i in range(p):
                rows[i] = idx[i]
                ones += _popcount(idx[i])
            if _det_mod_bits(rows, p, p, a) != 0:
                kept += 1
                per = _ryser_bits(rows, p, sums)
                if (pp - ones) & 1:
                    total -= per
                else:
                    total += per
            # next combination with idx[0] fixed
            t = p - 1
            while t >= 1 and idx[t] == nwords - p + t:
                t -= 1
            if t < 1:
                break
            idx[t] += 1
            for u in range(t + 1, p):
                idx[u] = idx[u - 1] + 1
    return total, visited, kept


@njit(cache=True, nogil=True)
def permanent_bits(rows, n):
    sums = np.zeros(n, dtype=np.int64)
    return _ryser_bits(rows, n, sums)


@njit(cache=True, nogil=True)
def determinant_bits(rows, n):
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            a[i, j] = (rows[i] >> j) & 1
    return _bareiss(a, n)
