"""Number-theoretic transforms over four fixed 62-bit primes.

All heavy arithmetic is vectorized with numpy uint64: residue vectors are
arrays of shape (4, n), one row per prime, and modular multiplication uses
Barrett reduction built from a 32-bit-split mulhi.  A "transform" always
means the batched transform across all four primes at once.
"""

from __future__ import annotations

import numpy as np

from .errors import ContextTooSmall

# 62-bit primes p = k * 2^44 + 1; the product exceeds 2^247.
PRIMES = (
    4611105476287922177,
    4610999923171655681,
    4610929554427478017,
    4610577710706589697,
)
MAX_LOG_LEN = 44
PRIME_PRODUCT = 1
for _p in PRIMES:
    PRIME_PRODUCT *= _p

_U = np.uint64
_M32 = _U(0xFFFFFFFF)
_P_COL = np.array(PRIMES, dtype=np.uint64).reshape(4, 1)
_MU_COL = np.array([(1 << 125) // p for p in PRIMES], dtype=np.uint64).reshape(4, 1)


def _mulhi(a, b):
    """High 64 bits of a*b for a < 2^63, b < 2^64 (elementwise uint64)."""
    a1 = a >> _U(32)
    a0 = a & _M32
    b1 = b >> _U(32)
    b0 = b & _M32
    t = a0 * b0
    t1 = a1 * b0 + (t >> _U(32))
    t2 = a0 * b1 + (t1 & _M32)
    return a1 * b1 + (t1 >> _U(32)) + (t2 >> _U(32))


def _per_prime(col, ndim):
    """Reshape a (4, 1) per-prime constant to broadcast over ndim-array rows."""
    return col.reshape((4,) + (1,) * (ndim - 1))


def mul_mod(a, b):
    """a*b mod p per prime row; operands reduced, shape (4, ...)."""
    p = _per_prime(_P_COL, a.ndim)
    mu = _per_prime(_MU_COL, a.ndim)
    lo = a * b
    hi = _mulhi(a, b)
    x1 = (hi << _U(3)) | (lo >> _U(61))
    q = _mulhi(x1, mu)
    r = lo - q * p
    for _ in range(3):
        r = np.where(r >= p, r - p, r)
    return r


def add_mod(a, b):
    p = _per_prime(_P_COL, a.ndim)
    s = a + b
    return np.where(s >= p, s - p, s)


def sub_mod(a, b):
    p = _per_prime(_P_COL, a.ndim)
    return np.where(a >= b, a - b, a + p - b)


def _root_of_unity_cols():
    """Primitive 2^MAX_LOG_LEN-th root of unity per prime, deterministic."""
    roots = []
    for p in PRIMES:
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        roots.append(pow(z, (p - 1) >> MAX_LOG_LEN, p))
    return tuple(roots)


ROOTS = _root_of_unity_cols()


def _power_table(w, count):
    """Powers w^0 .. w^(count-1) per prime, shape (4, count), by doubling."""
    table = np.ones((4, 1), dtype=np.uint64)
    while table.shape[1] < count:
        m = table.shape[1]
        wm = table[:, -1:]
        wm = mul_mod(wm, w)  # w^m
        table = np.concatenate([table, mul_mod(table, wm)], axis=1)
    return table[:, :count]


class TransformStats:
    """Global forward/inverse transform counters (acceptance instrumentation)."""

    def __init__(self):
        self.forward = 0
        self.inverse = 0

    def reset(self):
        self.forward = 0
        self.inverse = 0


stats = TransformStats()

_TABLE_CACHE = {}


class NttContext:
    """Fixed prime set plus chunk width; twiddle tables are cached globally."""

    def __init__(self, c: int):
        if c < 1:
            raise ValueError("chunk width must be positive")
        self.primes = PRIMES
        self.a = MAX_LOG_LEN
        self.roots = ROOTS
        self.c = c
        self.forward_count = 0
        self.inverse_count = 0

    def reset_counters(self):
        self.forward_count = 0
        self.inverse_count = 0

    def _table(self, n: int):
        """(W, Winv, n_inv) for transform length n: powers 0..n/2-1 of w_n."""
        tab = _TABLE_CACHE.get(n)
        if tab is not None:
            return tab
        if n & (n - 1) or n > (1 << self.a):
            raise ContextTooSmall(f"transform length {n} unsupported")
        logn = n.bit_length() - 1
        w = np.array(
            [pow(r, 1 << (self.a - logn), p) for r, p in zip(self.roots, self.primes)],
            dtype=np.uint64,
        ).reshape(4, 1)
        winv = np.array(
            [pow(int(x), p - 2, p) for x, p in zip(w[:, 0], self.primes)],
            dtype=np.uint64,
        ).reshape(4, 1)
        W = _power_table(w, n // 2)
        Winv = _power_table(winv, n // 2)
        n_inv = np.array([pow(n, p - 2, p) for p in self.primes], dtype=np.uint64).reshape(4, 1)
        tab = (W, Winv, n_inv)
        _TABLE_CACHE[n] = tab
        return tab

    def forward(self, x):
        """In-place DIF transform; natural order in, bit-reversed out."""
        n = x.shape[1]
        if n == 1:
            self.forward_count += 1
            stats.forward += 1
            return x
        W, _, _ = self._table(n)
        half = n // 2
        while half >= 1:
            step = n // (2 * half)
            tw = W[:, : half * step: step]
            v = x.reshape(4, step, 2, half)
            u, t = v[:, :, 0, :].copy(), v[:, :, 1, :].copy()
            v[:, :, 0, :] = add_mod(u, t)
            v[:, :, 1, :] = mul_mod(sub_mod(u, t), tw[:, None, :])
            half //= 2
        self.forward_count += 1
        stats.forward += 1
        return x

    def inverse(self, x):
        """In-place DIT inverse; bit-reversed in, natural order out, scaled by 1/n."""
        n = x.shape[1]
        if n == 1:
            self.inverse_count += 1
            stats.inverse += 1
            return x
        _, Winv, n_inv = self._table(n)
        half = 1
        while half <= n // 2:
            step = n // (2 * half)
            tw = Winv[:, : half * step: step]
            v = x.reshape(4, step, 2, half)
            u = v[:, :, 0, :].copy()
            t = mul_mod(v[:, :, 1, :], tw[:, None, :])
            v[:, :, 0, :] = add_mod(u, t)
            v[:, :, 1, :] = sub_mod(u, t)
            half *= 2
        x[:] = mul_mod(x, n_inv)
        self.inverse_count += 1
        stats.inverse += 1
        return x

    def crt(self, residues):
        """Garner reconstruction of shape-(4, n) residues into centered Python ints.

        Returns a list of ints in (-P/2, P/2], P the prime product.
        """
        p1, p2, p3, p4 = PRIMES
        g1 = residues[0]
        g2 = _garner_step(residues[1], g1, (p1,), p2, 1)
        g3 = _garner_step(residues[2], g1, (p1,), p3, 2, g2)
        g4 = _garner_step(residues[3], g1, (p1,), p4, 3, g2, g3)
        l1, l2, l3, l4 = (g.tolist() for g in (g1, g2, g3, g4))
        half = PRIME_PRODUCT // 2
        out = []
        for a, b, c, d in zip(l1, l2, l3, l4):
            v = a + p1 * (b + p2 * (c + p3 * d))
            if v > half:
                v -= PRIME_PRODUCT
            out.append(v)
        return out


def _reduce_into(x, p_idx):
    """Reduce values < 2^62 modulo PRIMES[p_idx] (one conditional subtract)."""
    p = _U(PRIMES[p_idx])
    return np.where(x >= p, x - p, x)


def _mul_mod_single(a, b_int, p_idx):
    """a * b mod PRIMES[p_idx] with scalar b, via the batched Barrett row."""
    p = PRIMES[p_idx]
    b = _U(b_int % p)
    lo = a * b
    hi = _mulhi(a, b)
    x1 = (hi << _U(3)) | (lo >> _U(61))
    q = _mulhi(x1, _U((1 << 125) // p))
    r = lo - q * _U(p)
    for _ in range(3):
        r = np.where(r >= _U(p), r - _U(p), r)
    return r


def _garner_step(r_k, g1, _unused, p_k, k, *prev):
    """Mixed-radix digit for prime index k (0-based), given earlier digits."""
    # acc = value of digits so far modulo p_k
    acc = _reduce_into(g1, k)
    scale = 1
    for idx, g in enumerate(prev, start=1):
        scale = scale * PRIMES[idx - 1] % p_k
        acc = (acc + _mul_mod_single(_reduce_into(g, k), scale, k)) % _U(p_k)
    diff = np.where(r_k >= acc, r_k - acc, r_k + _U(p_k) - acc)
    modulus_prod = 1
    for idx in range(k):
        modulus_prod = modulus_prod * PRIMES[idx] % p_k
    inv = pow(modulus_prod, p_k - 2, p_k)
    return _mul_mod_single(diff, inv, k)
