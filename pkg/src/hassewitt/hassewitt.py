"""Pipeline driver: Hasse-Witt matrices for all admissible primes up to N.

For each row index i the recurrence v_{n+1} = v_n M(n)/D(n) is unrolled with
a pair of remainder trees (the matrix chain and the scalar denominator chain,
sharing one modulus tree), using moduli p^e shifted left by w so that the
final w factors are multiplied in exactly.  Rows are merged into full
matrices per prime; small primes and any prime where the valuation
bookkeeping fails fall back to the brute-force oracle that powers f up to
f^((p-1)/2) mod p directly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import gmpy2
import numpy as np

from .bigmat import IntMatrix, mat_mul_classical, vec_mat_mul
from .curve import AdmissiblePrimeSet, CurveModel, admissible_primes
from .errors import PrecisionFailure
from .remainder import ForestPlan, default_k, modulus_tree, remainder_tree
from .transition import TransitionSystem, derive_transition, evaluate_matrix

_mpz = gmpy2.mpz

NAIVE_CUTOFF = 64  # primes below this go straight to the oracle


@dataclass(frozen=True)
class RowJob:
    """One row's worth of work: the transition system plus forest geometry."""

    curve: CurveModel
    i: int
    ts: TransitionSystem
    e: int
    w: int
    primes: AdmissiblePrimeSet
    plan: ForestPlan


@dataclass(frozen=True)
class HasseWittRecord:
    p: int
    W: tuple                   # g x g entries in [0, p)
    trace: int                 # sum of diagonal mod p
    charpoly: tuple            # 2g+1 ascending coefficients of the mod-p char poly
    source: str                # "forest" or "naive"
    a_p: Optional[int] = None  # exact Frobenius trace, genus 1 only


# ---------------------------------------------------------------------------
# Brute-force oracle


def _poly_mul_mod(a, b, p):
    """Product of coefficient lists mod p via packed big-integer multiplication."""
    la, lb = len(a), len(b)
    bound = min(la, lb) * (p - 1) * (p - 1) + 1
    if bound.bit_length() <= 63:
        slot = 1
    else:
        if p >= 1 << 31:
            raise ValueError("prime too large for packed multiplication")
        slot = 2
    pa = np.zeros(la * slot, dtype=np.uint64)
    pb = np.zeros(lb * slot, dtype=np.uint64)
    pa[::slot] = a
    pb[::slot] = b
    za = int.from_bytes(pa.tobytes(), "little")
    zb = int.from_bytes(pb.tobytes(), "little")
    zc = _mpz(za) * _mpz(zb)
    lc = la + lb - 1
    nbytes = lc * slot * 8
    buf = int(zc).to_bytes(nbytes + 16, "little")[:nbytes]
    words = np.frombuffer(buf, dtype=np.uint64)
    if slot == 1:
        return (words % np.uint64(p)).tolist()
    lo = words[0::2] % np.uint64(p)
    hi = words[1::2] % np.uint64(p)
    shift = np.uint64((1 << 64) % p)
    return ((hi * shift + lo) % np.uint64(p)).tolist()


def _poly_pow_mod(coeffs, exp, p):
    base = [c % p for c in coeffs]
    result = [1]
    for bit in bin(exp)[2:]:
        result = _poly_mul_mod(result, result, p)
        if bit == "1":
            result = _poly_mul_mod(result, base, p)
    return result


def naive_hassewitt(curve: CurveModel, p: int):
    """g x g matrix with (i,j) entry the coefficient of x^(p*i-j) in f^((p-1)/2)."""
    g = curve.g
    power = _poly_pow_mod(list(curve.coeffs), (p - 1) // 2, p)
    def coeff(k):
        return power[k] if 0 <= k < len(power) else 0
    return tuple(
        tuple(coeff(p * i - j) for j in range(1, g + 1)) for i in range(1, g + 1)
    )


def _legendre_table(p):
    t = np.full(p, -1, dtype=np.int64)
    sq = (np.arange(p, dtype=np.uint64) ** 2) % np.uint64(p)
    t[sq] = 1
    t[0] = 0
    return t


def point_count(curve: CurveModel, p: int) -> int:
    """#C(F_p) for the smooth model of y^2 = f(x), by direct enumeration."""
    if p >= 1 << 31:
        raise ValueError("prime too large for direct enumeration")
    xs = np.arange(p, dtype=np.uint64)
    vals = np.zeros(p, dtype=np.uint64)
    up = np.uint64(p)
    for c in reversed(curve.coeffs):
        vals = (vals * xs + np.uint64(c % p)) % up
    chi = _legendre_table(p)
    count = p + int(chi[vals.astype(np.int64)].sum())
    if curve.d % 2:
        count += 1  # one point at infinity on the odd-degree model
    else:
        count += 1 + int(chi[curve.coeffs[-1] % p])
    return count


def exact_trace_genus1(curve: CurveModel, p: int, trace: int) -> int:
    """Frobenius trace a_p: unique lift of the residue once p > 16, else counted."""
    if p >= 17:
        bound = 2 * math.isqrt(4 * p) // 2  # floor(2 sqrt p)
        a = trace if trace <= bound else trace - p
        assert a * a <= 4 * p
        return a
    return p + 1 - point_count(curve, p)


# ---------------------------------------------------------------------------
# Row assembly


def initial_vector(curve: CurveModel, i: int):
    """v_0 for row i: the window covers exponents i-r .. i-1, and f^0 = 1."""
    V = [0] * curve.r
    V[curve.r - i] = 1
    return tuple(V)


def char_poly_mod(W, p: int):
    """Ascending coefficients of lambda^g * det(lambda*I - W) mod p, degree 2g."""
    g = len(W)
    tr = sum(W[i][i] for i in range(g)) % p
    if g == 1:
        low = [(-tr) % p, 1]
    elif g == 2:
        det = (W[0][0] * W[1][1] - W[0][1] * W[1][0]) % p
        low = [det, (-tr) % p, 1]
    else:
        tr2 = sum(W[i][j] * W[j][i] for i in range(g) for j in range(g)) % p
        e2 = (tr * tr - tr2) * pow(2, p - 2, p) % p
        det = (
            W[0][0] * (W[1][1] * W[2][2] - W[1][2] * W[2][1])
            - W[0][1] * (W[1][0] * W[2][2] - W[1][2] * W[2][0])
            + W[0][2] * (W[1][0] * W[2][1] - W[1][1] * W[2][0])
        ) % p
        low = [(-det) % p, e2, (-tr) % p, 1]
    return tuple([0] * g + low)


def _valuation(x, p, cap):
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v, x


def assemble_row(C, c, tailM, tailD, p, e, g):
    """Turn tree residues plus exact tail factors into g window entries mod p.

    Computes C * (M_j .. M_{j+w-1}) / (c * D_j .. D_{j+w-1}) mod p, restricted
    to the last g coordinates, peeling the common power of p off numerator and
    denominator first.  Raises PrecisionFailure when the p-adic bookkeeping
    assumptions fail for this prime.
    """
    pe = p ** e
    c = int(c) % pe
    if c == 0:
        raise PrecisionFailure(p, "denominator residue vanishes mod p^e")
    nu_pre, c_unit = _valuation(c, p, e)

    r = len(C)
    T = IntMatrix.identity(r)
    u = 1
    for Mt in tailM:
        T = mat_mul_classical(T, Mt)
    for Dt in tailD:
        u *= Dt
    nu_tail, u_unit = _valuation(u, p, u.bit_length())

    pv = p ** nu_pre
    Cred = []
    for x in C:
        x = int(x)
        if x % pv:
            raise PrecisionFailure(p, "numerator residue has smaller valuation")
        Cred.append((x // pv) % p)

    pt = p ** nu_tail
    denom = c_unit % p * (u_unit % p) % p
    inv = pow(denom, p - 2, p)
    out = []
    for col in range(r - g, r):
        acc = 0
        for a in range(r):
            t = int(T.rows[a][col])
            if t % pt:
                raise PrecisionFailure(p, "tail column valuation too small")
            acc += Cred[a] * (t // pt % p)
        out.append(acc % p * inv % p)
    return tuple(out)


# ---------------------------------------------------------------------------
# Forest-driven row computation


class _RowState:
    """Carried state of one row's forest pass: vectors V, v and the modulus tail Y."""

    def __init__(self, curve, ts, plan, prime_set):
        self.curve = curve
        self.ts = ts
        self.plan = plan
        self.prime_set = prime_set  # set of primes handled by the forest
        self.e = ts.e
        self.w = ts.w
        self.V = initial_vector(curve, ts.i)
        self.v = 1
        Y = _mpz(1)
        for p in prime_set:
            Y *= p ** self.e
        self.Y = Y

    def _modulus(self, j):
        p = 2 * j + 1 + 2 * self.w
        return p ** self.e if p in self.prime_set else 1

    def run_subtree(self, s, meter=None):
        """Process subtree s; returns {p: row entries} and failures {p: reason}."""
        t = self.plan.t
        start = s * t
        js = range(start, start + t)
        m_block = [self._modulus(j) for j in js]
        m_levels = modulus_tree(m_block)
        A_block = []
        d_block = []
        for j in js:
            Mn, Dn = evaluate_matrix(self.ts, j)
            A_block.append(IntMatrix(Mn))
            d_block.append(IntMatrix(((Dn,),)))
        C, M_root, m_root = remainder_tree(
            self.V, A_block, m_block, m_levels=m_levels, meter=meter
        )
        c, D_root, _ = remainder_tree(
            (self.v,), d_block, m_block, m_levels=m_levels, meter=meter
        )
        rows = {}
        failures = {}
        g = self.curve.g
        for idx, j in enumerate(js):
            p = 2 * j + 1 + 2 * self.w
            if p not in self.prime_set:
                continue
            tailM = []
            tailD = []
            for u in range(j, j + self.w):
                Mu, Du = evaluate_matrix(self.ts, u)
                tailM.append(IntMatrix(Mu))
                tailD.append(Du)
            try:
                entries = assemble_row(
                    C[idx], c[idx][0], tailM, tailD, p, self.e, g
                )
            except PrecisionFailure as exc:
                failures[p] = exc
                continue
            rows[p] = tuple(reversed(entries))  # last g window entries, reversed
        # Carry state into the next subtree.
        q, rem = gmpy2.t_divmod(self.Y, m_root)
        assert rem == 0, "modulus product does not divide carried Y"
        self.Y = q
        self.V = tuple(_mpz(x) % self.Y for x in vec_mat_mul(self.V, M_root))
        self.v = int(_mpz(self.v) * D_root.rows[0][0] % self.Y)
        return rows, failures

    def covered_below(self, s):
        """All primes this row handles are below this bound after subtree s."""
        return 2 * (s + 1) * self.plan.t + 2 * self.w + 1


def _record(curve, p, W, source):
    p = int(p)
    trace = sum(W[i][i] for i in range(curve.g)) % p
    a_p = exact_trace_genus1(curve, p, trace) if curve.g == 1 else None
    return HasseWittRecord(
        p=p,
        W=tuple(tuple(int(x) % p for x in row) for row in W),
        trace=trace,
        charpoly=char_poly_mod(W, p),
        source=source,
        a_p=a_p,
    )


def naive_record(curve: CurveModel, p: int) -> HasseWittRecord:
    return _record(curve, p, naive_hassewitt(curve, p), "naive")


def iter_hassewitt_records(
    curve: CurveModel,
    N: int,
    *,
    k: Optional[int] = None,
    k_adjust: int = 0,
    naive_cutoff: int = NAIVE_CUTOFF,
    safe_mode: bool = False,
    force_naive: bool = False,
    meter=None,
    failure_log: Optional[list] = None,
):
    """Yield one HasseWittRecord per admissible prime p <= N, ascending.

    Records stream out as forest subtrees complete.  failure_log, if given,
    collects (p, reason) for primes rerouted to the oracle by a failed
    valuation check.
    """
    prime_set = admissible_primes(curve, N)
    plist = [int(p) for p in prime_set.primes]
    small = [p for p in plist if p < naive_cutoff]
    big = [p for p in plist if p >= naive_cutoff]

    for p in small:
        yield naive_record(curve, p)
    if force_naive or not big:
        for p in big:
            yield naive_record(curve, p)
        return

    systems = [derive_transition(curve, i, safe_mode=safe_mode) for i in range(1, curve.g + 1)]
    max_w = max(ts.w for ts in systems)
    # Leaf j of the row with shift w serves p = 2j+1+2w; size the forest so the
    # largest prime is reachable by every row.
    j_max = (max(big) - 1) // 2  # for w = 0; rows with larger w need fewer leaves
    b = 1 << max(j_max.bit_length(), 1)
    ell = b.bit_length() - 1
    if k is None:
        k = default_k(ell, curve.g, k_adjust)
    plan = ForestPlan.make(b, k)

    big_set = set(big)
    states = [_RowState(curve, ts, plan, big_set) for ts in systems]
    pending = {p: {} for p in big}
    failed = {}
    emitted = 0  # primes below this value have been yielded

    def drain(bound):
        nonlocal emitted
        ready = sorted(p for p in pending if emitted <= p < bound)
        for p in ready:
            rows = pending.pop(p)
            if p in failed:
                yield naive_record(curve, p)
            else:
                assert len(rows) == curve.g, f"missing rows for p={p}"
                W = tuple(rows[i] for i in range(1, curve.g + 1))
                yield _record(curve, p, W, "forest")
        emitted = max(emitted, bound)

    # Row passes are independent; HASSEWITT_THREADS > 1 runs them concurrently
    # within each subtree round (results are merged deterministically by p).
    workers = max(1, int(os.environ.get("HASSEWITT_THREADS", "1")))
    pool = ThreadPoolExecutor(workers) if workers > 1 and len(states) > 1 else None
    try:
        for s in range(1 << plan.k):
            if pool is not None:
                results = list(pool.map(lambda st: st.run_subtree(s, meter=meter), states))
            else:
                results = [state.run_subtree(s, meter=meter) for state in states]
            for state, (rows, fails) in zip(states, results):
                for p, row in rows.items():
                    pending[p][state.ts.i] = row
                for p, exc in fails.items():
                    failed[p] = exc
                    if failure_log is not None:
                        failure_log.append((p, str(exc)))
            bound = min(state.covered_below(s) for state in states)
            yield from drain(bound)
        yield from drain(max(big) + 1)
        assert not pending, "unemitted primes remain"
    finally:
        if pool is not None:
            pool.shutdown()


def compute_hassewitt_matrices(curve: CurveModel, N: int, **options):
    """All records for admissible p <= N, sorted by p."""
    return list(iter_hassewitt_records(curve, N, **options))
