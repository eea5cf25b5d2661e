"""Exact products of small matrices with huge integer entries.

Two routes: classical entrywise multiplication (gmpy2), and the chunked
FFT scheme: entries become polynomials in 2^c with balanced signed digits,
each digit polynomial is transformed once per matrix entry, the Fourier
coefficients are multiplied as r x r matrices over the four NTT primes,
and r^2 inverse transforms plus CRT and carry evaluation recover the
product.  A matrix product therefore costs 2r^2 forward and r^2 inverse
transforms instead of O(r^3).
"""

from __future__ import annotations

import gmpy2

from . import ntt
from .errors import ContextTooSmall, DimensionMismatch
from .ntt import MAX_LOG_LEN, PRIME_PRODUCT, NttContext

import numpy as np

# Entries below this bit size are multiplied classically; the transform
# route only wins once the per-entry encode/CRT overhead is amortized.
CLASSICAL_THRESHOLD_BITS = 1 << 21

_mpz = gmpy2.mpz


class IntMatrix:
    """Square r x r matrix with arbitrary-precision integer entries."""

    __slots__ = ("r", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(_mpz(x) for x in row) for row in rows)
        r = len(rows)
        if any(len(row) != r for row in rows):
            raise DimensionMismatch("matrix must be square")
        self.r = r
        self.rows = rows

    @classmethod
    def identity(cls, r):
        return cls(tuple(tuple(1 if a == b else 0 for b in range(r)) for a in range(r)))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def max_bits(self):
        return max((int(x).bit_length() for row in self.rows for x in row), default=0)

    def bit_size(self):
        return sum(int(x).bit_length() + 1 for row in self.rows for x in row)

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def __repr__(self):
        return f"IntMatrix({self.rows!r})"


def mat_mul_classical(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A.r != B.r:
        raise DimensionMismatch(f"{A.r} != {B.r}")
    cols = [B.column(j) for j in range(B.r)]
    return IntMatrix(
        tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in A.rows
        )
    )


def vec_mat_mul_classical(V, A: IntMatrix):
    if len(V) != A.r:
        raise DimensionMismatch(f"{len(V)} != {A.r}")
    return tuple(sum(v * A.rows[k][j] for k, v in enumerate(V)) for j in range(A.r))


def choose_chunk_width(entry_bits: int, r: int) -> int:
    """Largest c with (#chunks) * 2^(2c) * r * 2 below the prime product."""
    if entry_bits < 1:
        raise ValueError("entry_bits must be positive")
    for c in range(123, 0, -1):
        chunks = -(-entry_bits // c) + 1  # +1 for the balancing carry
        if chunks * (1 << (2 * c)) * r * 2 < PRIME_PRODUCT:
            return c
    raise ContextTooSmall("no chunk width fits the prime product")


def _balanced_digits(x, c, count):
    """count balanced base-2^c digits of x, each in [-2^(c-1), 2^(c-1)]."""
    neg = x < 0
    if neg:
        x = -x
    raw = _split_digits(x, c, count)
    half = 1 << (c - 1)
    full = 1 << c
    carry = 0
    out = []
    for t in range(count):
        v = raw[t] + carry
        carry = 0
        if v >= half:
            v -= full
            carry = 1
        out.append(v)
    assert carry == 0, "digit count too small"
    if neg:
        out = [-v for v in out]
    return out


def _split_digits(x, c, count):
    """Unsigned base-2^c digits, low to high, by recursive halving."""
    if count == 1:
        return [x]
    h = count // 2
    lo = x & ((1 << (c * h)) - 1)
    hi = x >> (c * h)
    return _split_digits(lo, c, h) + _split_digits(hi, c, count - h)


def _digit_residues(digits, n):
    """Residue rows (4, n) for a signed digit list, zero padded to length n."""
    arr = np.zeros((4, n), dtype=np.uint64)
    for i, p in enumerate(ntt.PRIMES):
        arr[i, : len(digits)] = [d % p for d in digits]
    return arr


def _recompose(coeffs, c):
    """Evaluate sum coeffs[t] * 2^(c t) by pairwise combination."""
    vals = [_mpz(v) for v in coeffs]
    shift = c
    while len(vals) > 1:
        nxt = [vals[i] + (vals[i + 1] << shift) for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
        shift *= 2
    return vals[0] if vals else _mpz(0)


def _fft_product(ctx: NttContext, a_rows, b_rows):
    """Exact product of rectangular integer matrices via the chunked NTT scheme."""
    ra, inner = len(a_rows), len(a_rows[0])
    rb = len(b_rows[0])
    if len(b_rows) != inner:
        raise DimensionMismatch("inner dimensions differ")
    c = ctx.c
    bits = max(
        max((int(x).bit_length() for row in a_rows for x in row), default=1),
        max((int(x).bit_length() for row in b_rows for x in row), default=1),
        1,
    )
    chunks = -(-bits // c) + 1
    r_eff = max(inner, 1)
    if chunks * (1 << (2 * c)) * r_eff * 2 >= PRIME_PRODUCT:
        raise ContextTooSmall(f"{bits}-bit entries overflow c={c}")
    conv_len = 2 * chunks - 1
    n = 1 << (conv_len - 1).bit_length()
    if n > (1 << MAX_LOG_LEN):
        raise ContextTooSmall(f"transform length {n} exceeds 2^{MAX_LOG_LEN}")

    def transform(rows):
        out = []
        for row in rows:
            frow = []
            for x in row:
                digits = _balanced_digits(int(x), c, chunks)
                arr = _digit_residues(digits, n)
                frow.append(ctx.forward(arr))
            out.append(frow)
        return out

    FA = transform(a_rows)
    FB = transform(b_rows)
    result = []
    for i in range(ra):
        out_row = []
        for j in range(rb):
            acc = ntt.mul_mod(FA[i][0], FB[0][j])
            for k in range(1, inner):
                acc = ntt.add_mod(acc, ntt.mul_mod(FA[i][k], FB[k][j]))
            ctx.inverse(acc)
            coeffs = ctx.crt(acc[:, :conv_len])
            out_row.append(_recompose(coeffs, c))
        result.append(tuple(out_row))
    return tuple(result)


def mat_mul_fft(ctx: NttContext, A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A.r != B.r:
        raise DimensionMismatch(f"{A.r} != {B.r}")
    return IntMatrix(_fft_product(ctx, A.rows, B.rows))


def vec_mat_mul_fft(ctx: NttContext, V, A: IntMatrix):
    if len(V) != A.r:
        raise DimensionMismatch(f"{len(V)} != {A.r}")
    return _fft_product(ctx, (tuple(V),), A.rows)[0]


_context_cache = {}


def _context_for(bits, r):
    c = choose_chunk_width(bits, r)
    ctx = _context_cache.get(c)
    if ctx is None:
        ctx = NttContext(c)
        _context_cache[c] = ctx
    return ctx


def mat_mul(A: IntMatrix, B: IntMatrix, threshold_bits=CLASSICAL_THRESHOLD_BITS) -> IntMatrix:
    """Dispatch: classical below the size cutoff, FFT above."""
    bits = max(A.max_bits(), B.max_bits(), 1)
    if bits < threshold_bits:
        return mat_mul_classical(A, B)
    return mat_mul_fft(_context_for(bits, A.r), A, B)


def vec_mat_mul(V, A: IntMatrix, threshold_bits=CLASSICAL_THRESHOLD_BITS):
    bits = max(
        max((int(x).bit_length() for x in V), default=1), A.max_bits(), 1
    )
    if bits < threshold_bits:
        return vec_mat_mul_classical(V, A)
    return vec_mat_mul_fft(_context_for(bits, A.r), V, A)
