"""Curve validation, discriminants, and admissible prime enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotSquarefree, UnsupportedGenus, ZeroLeading

SIEVE_WINDOW = 1 << 20  # odd-entry window for the segmented sieve


@dataclass(frozen=True)
class CurveModel:
    """Static description of y^2 = f(x) with f = sum f_i x^i."""

    coeffs: tuple          # f_0 .. f_d
    d: int                 # degree of f
    g: int                 # genus, in {1, 2, 3}
    r: int                 # recurrence dimension: d if f_0 != 0, else d - 1
    zero_constant: bool    # f_0 == 0
    disc: int              # discriminant of f

    def f_eval(self, x):
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def label(self):
        return ",".join(str(c) for c in self.coeffs)


@dataclass
class AdmissiblePrimeSet:
    N: int
    primes: np.ndarray                     # ascending int64 array of admissible p
    skipped: list = field(default_factory=list)  # (p, reason) for excluded odd p

    def __contains__(self, p):
        i = np.searchsorted(self.primes, p)
        return i < len(self.primes) and self.primes[i] == p

    def __len__(self):
        return len(self.primes)


def discriminant(coeffs) -> int:
    """Exact discriminant of f via the Sylvester resultant of f and f'.

    disc(f) = (-1)^(d(d-1)/2) Res(f, f') / f_d, computed with a
    fraction-free (Bareiss) integer determinant.
    """
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise ValueError("degree must be at least 1")
    d = len(c) - 1
    deriv = [i * c[i] for i in range(1, d + 1)]
    res = _resultant(c, deriv)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * res, c[-1])
    assert rem == 0
    return q

def _resultant(a, b) -> int:
    da, db = len(a) - 1, len(b) - 1
    n = da + db
    rows = []
    for i in range(db):  # shifted copies of a
        rows.append([0] * i + a[::-1] + [0] * (db - 1 - i))
    for i in range(da):  # shifted copies of b
        rows.append([0] * i + b[::-1] + [0] * (da - 1 - i))
    assert all(len(row) == n for row in rows)
    return _bareiss_det(rows)

def _bareiss_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def validate_curve(coeffs) -> CurveModel:
    """Check y^2 = f(x) defines a smooth hyperelliptic curve of genus 1..3."""
    c = tuple(int(x) for x in coeffs)
    if len(c) < 4:
        raise UnsupportedGenus(f"need a polynomial of degree >= 3, got {len(c)} coefficients")
    if c[-1] == 0:
        raise ZeroLeading("leading coefficient is zero")
    d = len(c) - 1
    g = (d - 1) // 2
    if g not in (1, 2, 3):
        raise UnsupportedGenus(f"genus {g} not supported (degree {d})")
    if c[0] == 0 and c[1] == 0:
        raise NotSquarefree("x^2 divides f")
    disc = discriminant(c)
    if disc == 0:
        raise NotSquarefree("discriminant of f vanishes")
    zero_constant = c[0] == 0
    r = d - 1 if zero_constant else d
    return CurveModel(coeffs=c, d=d, g=g, r=r, zero_constant=zero_constant, disc=disc)


def sieve_primes(N: int) -> np.ndarray:
    """All primes <= N, ascending, via an odd-only segmented sieve."""
    if N < 2:
        return np.array([], dtype=np.int64)
    base_limit = math.isqrt(N)
    base = _simple_sieve(max(base_limit, 3))
    chunks = [np.array([2], dtype=np.int64)]
    low = 3
    while low <= N:
        high = min(low + 2 * SIEVE_WINDOW, N + 1)  # exclusive, odd span
        count = (high - low + 1) // 2
        mask = np.ones(count, dtype=bool)
        for p in base[1:]:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2:: p] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high
    return np.concatenate(chunks)

def _simple_sieve(limit):
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p:: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def admissible_primes(curve: CurveModel, N: int) -> AdmissiblePrimeSet:
    """Odd primes p <= N of good reduction with p coprime to the needed coefficients.

    Good reduction is tested as p not dividing 2 * f_d * disc(f); primes of
    good reduction that happen to divide disc(f) are conservatively skipped.
    """
    if N < 3:
        return AdmissiblePrimeSet(N=N, primes=np.array([], dtype=np.int64))
    primes = sieve_primes(N)
    primes = primes[primes > 2]
    pivot = curve.coeffs[1] if curve.zero_constant else curve.coeffs[0]
    bad = abs(2 * curve.coeffs[-1] * curve.disc * pivot)
    # Only primes dividing `bad` can be excluded; test them individually.
    candidates = primes[bad % primes == 0] if len(primes) else primes
    skipped = []
    for p in candidates.tolist():
        if curve.disc % p == 0:
            reason = "divides disc(f)"
        elif curve.coeffs[-1] % p == 0:
            reason = "divides leading coefficient"
        elif not curve.zero_constant and curve.coeffs[0] % p == 0:
            reason = "divides constant coefficient"
        elif curve.zero_constant and curve.coeffs[1] % p == 0:
            reason = "divides linear coefficient"
        else:
            continue
        skipped.append((p, reason))
    if skipped:
        excluded = np.array([p for p, _ in skipped], dtype=np.int64)
        primes = primes[~np.isin(primes, excluded)]
    return AdmissiblePrimeSet(N=N, primes=primes, skipped=skipped)
