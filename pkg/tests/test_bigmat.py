"""Big-integer matrix products: classical vs transform route."""

import random

import pytest

from hassewitt import ntt
from hassewitt.bigmat import (IntMatrix, _context_for, choose_chunk_width,
                              mat_mul, mat_mul_classical, mat_mul_fft,
                              vec_mat_mul, vec_mat_mul_classical,
                              vec_mat_mul_fft)
from hassewitt.errors import ContextTooSmall, DimensionMismatch
from hassewitt.ntt import PRIME_PRODUCT


def _rand_matrix(rng, r, bits):
    return IntMatrix(
        [[rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(r)] for _ in range(r)]
    )


def test_identity_and_classical():
    A = IntMatrix([[1, 2], [3, 4]])
    I = IntMatrix.identity(2)
    assert mat_mul_classical(A, I) == A
    assert mat_mul_classical(I, A) == A
    B = IntMatrix([[5, 6], [7, 8]])
    assert mat_mul_classical(A, B) == IntMatrix([[19, 22], [43, 50]])
    assert vec_mat_mul_classical((1, 1), A) == (4, 6)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        IntMatrix([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        mat_mul_classical(IntMatrix([[1]]), IntMatrix.identity(2))
    with pytest.raises(DimensionMismatch):
        vec_mat_mul_classical((1, 2, 3), IntMatrix.identity(2))


def test_chunk_width_capacity():
    for bits, r in [(100, 1), (10**5, 8), (10**4, 3)]:
        c = choose_chunk_width(bits, r)
        chunks = -(-bits // c) + 1
        assert chunks * (1 << (2 * c)) * r * 2 < PRIME_PRODUCT
        # one step wider must overflow (c is maximal) unless at the cap
        if c < 123:
            chunks2 = -(-bits // (c + 1)) + 1
            assert chunks2 * (1 << (2 * (c + 1))) * r * 2 >= PRIME_PRODUCT


def test_fft_equals_classical_small():
    rng = random.Random(99)
    for _ in range(40):
        r = rng.randint(1, 8)
        bits = rng.choice([4, 40, 300, 3000])
        A = _rand_matrix(rng, r, bits)
        B = _rand_matrix(rng, r, bits)
        ctx = _context_for(bits, r)
        assert mat_mul_fft(ctx, A, B) == mat_mul_classical(A, B)
        V = tuple(rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(r))
        assert vec_mat_mul_fft(ctx, V, A) == vec_mat_mul_classical(V, A)


def test_fft_equals_classical_large():
    rng = random.Random(100)
    A = _rand_matrix(rng, 4, 10**5)
    B = _rand_matrix(rng, 4, 10**5)
    ctx = _context_for(10**5, 4)
    assert mat_mul_fft(ctx, A, B) == mat_mul_classical(A, B)


def test_transform_counts_per_product():
    rng = random.Random(101)
    for r in (1, 3, 8):
        A = _rand_matrix(rng, r, 2000)
        B = _rand_matrix(rng, r, 2000)
        ctx = _context_for(2000, r)
        ntt.stats.reset()
        mat_mul_fft(ctx, A, B)
        assert ntt.stats.forward == 2 * r * r
        assert ntt.stats.inverse == r * r


def test_dispatch_agrees_across_threshold():
    rng = random.Random(102)
    A = _rand_matrix(rng, 3, 400)
    B = _rand_matrix(rng, 3, 400)
    assert mat_mul(A, B, threshold_bits=1) == mat_mul(A, B, threshold_bits=10**6)
    V = (12, -7, 5)
    assert vec_mat_mul(V, A, threshold_bits=1) == vec_mat_mul(V, A, threshold_bits=10**6)


def test_zero_and_negative_entries():
    A = IntMatrix([[0, -1], [-(10**50), 10**50]])
    B = IntMatrix([[1, 0], [0, -1]])
    ctx = _context_for(200, 2)
    assert mat_mul_fft(ctx, A, B) == mat_mul_classical(A, B)


def test_context_too_small():
    ctx = _context_for(64, 2)  # wide chunks sized for tiny entries
    big = IntMatrix([[1 << 100000, 0], [0, 1]])
    with pytest.raises(ContextTooSmall):
        mat_mul_fft(ctx, big, big)
