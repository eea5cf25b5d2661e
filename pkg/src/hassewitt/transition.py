"""Derivation of the per-row transition recurrence v_{n+1} = v_n M(n) / D(n).

The window v_n holds r consecutive coefficients of f^n ending just left of
the Hasse-Witt entries for p = 2n+1.  Extending the window with the two
coefficient relations (division by k*f_0 or (n-k)*f_1 on the right,
(nd-k)*f_d on the left) and convolving with f yields an r x r matrix of
rational functions in n; clearing denominators gives integer-polynomial
M and D.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import CurveModel
from .errors import DivisionByZeroPolynomial, ZeroDenominatorAtIndex
from .polys import ONE, IntPoly, RatFunc, linear_factors, poly_lcm


@dataclass(frozen=True)
class TransitionSystem:
    i: int                  # row index, 1 <= i <= g
    r: int                  # window dimension
    M: tuple                # r x r tuple-of-tuples of IntPoly
    D: IntPoly              # common denominator polynomial
    e: int                  # moduli exponent: work mod p^e
    w: int                  # tail shift: last w factors handled exactly


def derive_transition(curve: CurveModel, i: int, safe_mode: bool = False) -> TransitionSystem:
    """Construct (M, D) for row i by symbolic window extension."""
    if not 1 <= i <= curve.g:
        raise ValueError(f"row index {i} out of range 1..{curve.g}")
    d, r = curve.d, curve.r
    f = curve.coeffs

    # Window entries keyed by offset delta, where the coefficient index is
    # k = 2*i*n + i + delta.  Each entry is an r-vector of RatFunc giving its
    # expansion over the basis v_n = entries at delta in [-r, -1].
    window = {}
    for idx in range(r):
        vec = [RatFunc.zero()] * r
        vec[idx] = RatFunc(ONE)
        window[idx - r] = tuple(vec)

    def combine(terms):
        acc = [RatFunc.zero()] * r
        for poly, vec in terms:
            if poly.is_zero():
                continue
            term = RatFunc(poly)
            for a in range(r):
                if not vec[a].is_zero():
                    acc[a] = acc[a] + vec[a] * term
        return acc

    def divide(vec, pivot):
        if pivot.is_zero():
            raise DivisionByZeroPolynomial("pivot polynomial vanishes identically")
        return tuple(x.div_poly(pivot) for x in vec)

    if not curve.zero_constant:
        # Rightward: k f0 f_k = sum_j (nj - k + j) f_j f_{k-j},  j = 1..d.
        for delta in range(0, 2 * i):
            pivot = IntPoly.linear(2 * i, i + delta) * f[0]
            terms = [
                (IntPoly.linear(j - 2 * i, j - i - delta) * f[j], window[delta - j])
                for j in range(1, d + 1)
                if f[j]
            ]
            window[delta] = divide(combine(terms), pivot)
        # Leftward: (nd - k) f_d f_k = -sum_j (n(d-j) - k - j) f_{d-j} f_{k+j}.
        for delta in range(-d - 1, 2 * i - 2 * d - 1, -1):
            pivot = IntPoly.linear(d - 2 * i, -i - delta) * f[d]
            terms = [
                (-(IntPoly.linear(d - j - 2 * i, -i - delta - j)) * f[d - j], window[delta + j])
                for j in range(1, d + 1)
                if f[d - j]
            ]
            window[delta] = divide(combine(terms), pivot)
    else:
        # f0 = 0 variant: pivots (n - k) f1 on the right, (nd - k) f_d on the left.
        for delta in range(0, 2 * i):
            pivot = IntPoly.linear(1 - 2 * i, -i - delta) * f[1]
            terms = [
                (-(IntPoly.linear(j + 1 - 2 * i, j - i - delta)) * f[j + 1], window[delta - j])
                for j in range(1, d)
                if f[j + 1]
            ]
            window[delta] = divide(combine(terms), pivot)
        for delta in range(-d, 2 * i - 2 * d, -1):
            pivot = IntPoly.linear(d - 2 * i, -i - delta) * f[d]
            terms = [
                (-(IntPoly.linear(d - j - 2 * i, -i - delta - j)) * f[d - j], window[delta + j])
                for j in range(1, d)
                if f[d - j]
            ]
            window[delta] = divide(combine(terms), pivot)

    # v_{n+1}[col] sits at offset 2i - r + col relative to the old base and is
    # the f-convolution of the extended window.
    columns = []
    for col in range(r):
        delta = 2 * i - r + col
        terms = [
            (IntPoly.const(f[j]), window[delta - j])
            for j in range(0, d + 1)
            if f[j] and (delta - j) in window
        ]
        columns.append(combine(terms))

    # Clear denominators: D = lcm of all entry denominators, M = T * D.
    D = ONE
    for colvec in columns:
        for entry in colvec:
            D = poly_lcm(D, entry.den)
    M = [[None] * r for _ in range(r)]
    for col in range(r):
        for row in range(r):
            entry = columns[col][row]
            M[row][col] = entry.num * (D // entry.den)

    # Remove common integer content, fix D's sign.
    import math
    content = D.content()
    for row in M:
        for p in row:
            content = math.gcd(content, p.content())
    if content > 1:
        D = IntPoly(tuple(c // content for c in D.coeffs))
        M = [[IntPoly(tuple(c // content for c in p.coeffs)) for p in row] for row in M]
    if D.coeffs[-1] < 0:
        D = -D
        M = [[-p for p in row] for row in M]

    e, w = _precision_from_denominator(curve, D, safe_mode)
    return TransitionSystem(i=i, r=r, M=tuple(tuple(row) for row in M), D=D, e=e, w=w)


def _precision_from_denominator(curve: CurveModel, D: IntPoly, safe_mode: bool):
    if safe_mode:
        return curve.d + 1, 0
    # A linear factor 2n + b of D hits the modulus prime p = 2m+1 at the fixed
    # distance (b-1)/2 below m; those indices must be pulled into the exact
    # tail.  Factors with slope != 2 hit at indices ~ m * 2/slope and are
    # covered by the p-adic valuation the residues can absorb (e = g).
    _, factors = linear_factors(D)
    w = 0
    for a, b in factors:
        if a == 2 and b >= 3:
            w = max(w, (b - 1) // 2)
    return curve.g, w


def precision_parameters(curve: CurveModel, i: int, safe_mode: bool = False):
    """(e, w) for row i: moduli p^e with the last w recurrence steps exact."""
    ts = derive_transition(curve, i, safe_mode=safe_mode)
    return ts.e, ts.w


def evaluate_matrix(ts: TransitionSystem, n: int):
    """Exact (M(n), D(n)); D(n) != 0 is guaranteed for n >= 0."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    Dn = ts.D(n)
    if Dn == 0:
        raise ZeroDenominatorAtIndex(f"D({n}) = 0")
    Mn = tuple(tuple(p(n) for p in row) for row in ts.M)
    return Mn, Dn


def dump_transition(ts: TransitionSystem) -> str:
    """Plain-text dump of (M, D) for debugging."""
    lines = [f"row i = {ts.i}, r = {ts.r}, e = {ts.e}, w = {ts.w}"]
    for a, row in enumerate(ts.M):
        for b, p in enumerate(row):
            lines.append(f"entry[{a}][{b}] = {p!r}")
    lines.append(f"D = {ts.D!r}")
    return "\n".join(lines)
