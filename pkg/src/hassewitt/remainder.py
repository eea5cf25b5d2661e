"""Accumulating remainder trees and remainder forests.

Given matrices A_0..A_{b-1}, moduli m_0..m_{b-1}, and a row vector V, the
tree computes every reduced partial product C_n = V A_0 ... A_{n-1} mod m_n
in quasilinear time: product trees for the m_j and A_j are built bottom-up,
then the C values are pushed top-down, each node reduced modulo the product
of the moduli below it.  The forest splits the sequence into 2^k subtrees
of width t = 2^(l-k), carrying the pair (V, Y = product of remaining m)
across subtrees so that each subtree's memory can be released after its
leaves are emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from .bigmat import IntMatrix, mat_mul, vec_mat_mul
from .errors import DimensionMismatch

_mpz = gmpy2.mpz


@dataclass(frozen=True)
class ForestPlan:
    """Shape of one remainder-forest run: b = 2^l leaves in 2^k subtrees."""

    b: int   # leaf count, power of two
    ell: int  # log2(b)
    k: int   # subtree split exponent, 0 <= k <= ell
    t: int   # subtree width 2^(ell-k)

    def __post_init__(self):
        if self.b != 1 << self.ell:
            raise ValueError("b must equal 2^ell")
        if not 0 <= self.k <= self.ell:
            raise ValueError("k out of range")
        if self.t != 1 << (self.ell - self.k):
            raise ValueError("t must equal 2^(ell-k)")

    @classmethod
    def make(cls, b: int, k: int) -> "ForestPlan":
        ell = (b - 1).bit_length()
        if b != 1 << ell:
            raise ValueError("leaf count must be a power of two")
        k = max(0, min(k, ell))
        return cls(b=b, ell=ell, k=k, t=1 << (ell - k))


def default_k(ell: int, g: int, k_adjust: int = 0) -> int:
    """Heuristic subtree split: round(2 log2(ell sqrt(g))), clamped to [0, ell]."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    k = round(2 * math.log2(ell * math.sqrt(g))) + k_adjust
    return max(0, min(k, ell))


class LeafStream:
    """On-demand source of (A_j, m_j) leaves, evaluated in contiguous blocks.

    The moduli must be enumerable cheaply up front (the forest needs their
    full product before the first subtree); the matrices are only ever
    requested one block at a time.
    """

    def __init__(self, total: int, moduli, matrix_block):
        self.total = total
        self._moduli = [int(m) for m in moduli]
        if len(self._moduli) != total:
            raise ValueError("modulus count does not match leaf count")
        if any(m < 1 for m in self._moduli):
            raise ValueError("moduli must be positive")
        self._matrix_block = matrix_block

    @classmethod
    def from_sequences(cls, A_list, m_list) -> "LeafStream":
        A_list = list(A_list)
        return cls(len(A_list), m_list, lambda start, count: A_list[start:start + count])

    def moduli(self, start=0, count=None):
        if count is None:
            count = self.total - start
        return self._moduli[start:start + count]

    def matrices(self, start, count):
        block = list(self._matrix_block(start, count))
        if len(block) != count:
            raise ValueError("matrix block has wrong length")
        return block


class MemoryMeter:
    """Coarse live-bit accounting with a high-water mark."""

    def __init__(self):
        self.current = 0
        self.peak = 0

    def add(self, bits):
        self.current += bits
        if self.current > self.peak:
            self.peak = self.current

    def release(self, bits):
        self.current -= bits


def pad_to_power_of_two(A_list, m_list):
    """Append identity/modulus-1 leaves up to the next power of two."""
    A_list, m_list = list(A_list), list(m_list)
    if len(A_list) != len(m_list):
        raise ValueError("leaf sequences differ in length")
    n = len(A_list)
    if n == 0:
        raise ValueError("empty leaf sequence")
    b = 1 << (n - 1).bit_length()
    r = A_list[0].r
    while len(A_list) < b:
        A_list.append(IntMatrix.identity(r))
        m_list.append(1)
    return A_list, m_list


def modulus_tree(m_list):
    """Bottom-up product tree of the moduli: levels[0] = leaves, levels[-1] = [root]."""
    levels = [[_mpz(m) for m in m_list]]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append([prev[2 * j] * prev[2 * j + 1] for j in range(len(prev) // 2)])
    return levels


def _matrix_tree(A_list):
    levels = [list(A_list)]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append([mat_mul(prev[2 * j], prev[2 * j + 1]) for j in range(len(prev) // 2)])
    return levels


def _vec_mod(vec, m):
    m = _mpz(m)
    return tuple(_mpz(x) % m for x in vec)


def _tree_bits(levels, size):
    return sum(size(node) for level in levels for node in level)


def remainder_tree(V, A_list, m_list, *, m_levels=None, meter=None):
    """All reduced partial products of one power-of-two leaf block.

    Returns (C, A_root, m_root) with C[j] = V A_0 ... A_{j-1} mod m_j.
    A prebuilt modulus tree may be passed in so that two chains sharing the
    same moduli (matrix and denominator) build it only once.
    """
    t = len(A_list)
    if t & (t - 1):
        raise ValueError("leaf count must be a power of two")
    if m_levels is None:
        m_levels = modulus_tree(m_list)
    if len(m_levels[0]) != t:
        raise DimensionMismatch("modulus tree does not match leaf count")
    r = A_list[0].r
    if len(V) != r:
        raise DimensionMismatch("vector length does not match matrix size")
    A_levels = _matrix_tree(A_list)

    if meter is not None:
        m_bits = _tree_bits(m_levels, lambda x: x.bit_length() + 1)
        a_bits = _tree_bits(A_levels, lambda x: x.bit_size())
        meter.add(m_bits + a_bits)

    ell = len(m_levels) - 1
    # Top-down: depth i of the tree has 2^i nodes, stored at list index ell - i.
    C = [_vec_mod(V, m_levels[ell][0])]
    c_bits = 0
    for i in range(1, ell + 1):
        ms = m_levels[ell - i]
        As = A_levels[ell - i]
        nxt = []
        for j in range(1 << i):
            parent = C[j // 2]
            if j % 2:
                parent = vec_mat_mul(parent, As[j - 1])
            nxt.append(_vec_mod(parent, ms[j]))
        C = nxt
        if meter is not None:
            bits = sum(int(x).bit_length() + 1 for vec in C for x in vec)
            meter.add(bits)
            meter.release(c_bits)
            c_bits = bits
    if meter is not None:
        meter.release(m_bits + a_bits + c_bits)
    return C, A_levels[-1][0], m_levels[-1][0]


def remainder_forest(V, leaves: LeafStream, plan: ForestPlan, *, meter=None):
    """Same leaves as one big remainder tree, computed in 2^k passes.

    Carries (V, Y) between subtrees: Y is the product of the moduli not yet
    consumed, and V accumulates the matrix product of finished subtrees
    reduced mod Y, so each subtree only ever sees numbers as large as the
    remaining moduli.
    """
    if leaves.total != plan.b:
        raise ValueError("plan does not match stream length")
    Y = _mpz(1)
    for m in leaves.moduli():
        Y *= m
    if meter is not None:
        meter.add(Y.bit_length() + 1)
    V = _vec_mod(V, Y)
    out = []
    for s in range(1 << plan.k):
        start = s * plan.t
        A_block = leaves.matrices(start, plan.t)
        m_block = leaves.moduli(start, plan.t)
        C, A_root, m_root = remainder_tree(V, A_block, m_block, meter=meter)
        out.extend(C)
        q, rem = gmpy2.t_divmod(Y, m_root)
        assert rem == 0, "modulus product does not divide the carried Y"
        Y = q
        V = _vec_mod(vec_mat_mul(V, A_root), Y)
    if meter is not None:
        meter.release(meter.current)
    return out
