"""Exact univariate integer polynomials and rational functions in one variable.

Everything here runs at curve-setup time on polynomials of degree O(d),
so clarity wins over speed: coefficients are plain Python ints and the
Euclidean steps go through fractions.Fraction.
"""

from __future__ import annotations

import math
from fractions import Fraction


class IntPoly:
    """Dense polynomial over Z, canonical form (no trailing zero coefficients)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(int(x) for x in c)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def linear(cls, a, b):
        """a*n + b"""
        return cls((b, a))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return IntPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPoly(tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(tuple(x * other for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return IntPoly(out)

    __rmul__ = __mul__

    def __call__(self, n):
        """Exact Horner evaluation."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * n + c
        return v

    def content(self):
        """gcd of coefficients, nonnegative; 0 for the zero polynomial."""
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self):
        c = self.content()
        if c in (0, 1):
            return self
        return IntPoly(tuple(x // c for x in self.coeffs))

    def __floordiv__(self, other):
        """Exact division; raises if the quotient is not an integer polynomial."""
        q, r = _divmod_frac(self, other)
        if not r.is_zero():
            raise ValueError(f"inexact polynomial division: {self} / {other}")
        return q

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*n")
            else:
                terms.append(f"{c}*n^{i}")
        return " + ".join(terms)


ZERO = IntPoly()
ONE = IntPoly((1,))


def _divmod_frac(a: IntPoly, b: IntPoly):
    """Polynomial divmod over Q, returned as IntPoly when the result is integral."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(x) for x in a.coeffs]
    quo = [Fraction(0)] * max(len(a.coeffs) - len(b.coeffs) + 1, 0)
    bl = Fraction(b.coeffs[-1])
    db = b.degree
    while len(rem) - 1 >= db and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < db:
            break
        k = len(rem) - 1 - db
        f = rem[-1] / bl
        quo[k] = f
        for i, bc in enumerate(b.coeffs):
            rem[k + i] -= f * bc
        rem.pop()
    return _from_fractions(quo), _from_fractions(rem)


def _from_fractions(fracs):
    if any(f.denominator != 1 for f in fracs):
        raise ValueError("non-integral coefficients")
    return IntPoly(tuple(int(f) for f in fracs))


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """gcd in Z[n] (content gcd times primitive gcd), positive leading coeff."""
    if a.is_zero():
        return b if b.coeffs and b.coeffs[-1] > 0 else -b
    if b.is_zero():
        return a if a.coeffs[-1] > 0 else -a
    cont = math.gcd(a.content(), b.content())
    # Monic Euclid over Q on the primitive parts.
    x = [Fraction(c) for c in a.primitive().coeffs]
    y = [Fraction(c) for c in b.primitive().coeffs]
    while y:
        x, y = y, _frac_mod(x, y)
    # x is the gcd over Q; rescale to a primitive integer polynomial.
    den = math.lcm(*(f.denominator for f in x))
    ints = [int(f * den) for f in x]
    g = IntPoly(ints).primitive()
    if g.coeffs[-1] < 0:
        g = -g
    return g * cont


def _frac_mod(a, b):
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db:
        f = a[-1] / b[-1]
        for i in range(db + 1):
            a[len(a) - 1 - db + i] -= f * b[i]
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_lcm(a: IntPoly, b: IntPoly) -> IntPoly:
    if a.is_zero() or b.is_zero():
        return ZERO
    g = poly_gcd(a, b)
    out = a * (b // g)
    if out.coeffs[-1] < 0:
        out = -out
    return out


def linear_factors(p: IntPoly):
    """Split p into linear factors a*n+b over Z plus a leftover (constant here).

    Returns (constant: IntPoly, factors: list[(a, b)]).  The transition
    denominators are products of linear forms by construction, so the
    leftover is a constant for every input we feed this.
    """
    factors = []
    rest = p
    while rest.degree >= 1:
        root = _rational_root(rest)
        if root is None:
            break
        num, den = root  # root = num/den, factor den*n - num
        fac = IntPoly.linear(den, -num)
        rest = rest // fac
        factors.append((den, -num))
    return rest, factors


def _rational_root(p: IntPoly):
    c0 = p.coeffs[0]
    cl = p.coeffs[-1]
    if c0 == 0:
        return (0, 1)
    for den in _divisors(abs(cl)):
        for num in _divisors(abs(c0)):
            for s in (1, -1):
                if p(Fraction(s * num, den)) == 0:
                    f = Fraction(s * num, den)
                    return (f.numerator, f.denominator)
    return None


def _divisors(n):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


class RatFunc:
    """Reduced rational function num/den with IntPoly parts, den lc > 0."""

    __slots__ = ("num", "den")

    def __init__(self, num: IntPoly, den: IntPoly = ONE, *, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero():
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num // g
                den = den // g
        if num.is_zero():
            den = ONE
        if den.coeffs[-1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def zero(cls):
        return cls(ZERO, ONE, reduce=False)

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        num = self.num * other.den + other.num * self.den
        return RatFunc(num, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, IntPoly):
            other = RatFunc(other, ONE, reduce=False)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        return RatFunc(self.num * other.num, self.den * other.den)

    def div_poly(self, p: IntPoly):
        """Divide by a polynomial."""
        if p.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        return RatFunc(self.num, self.den * p)

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})" if not self.den.is_one() else repr(self.num)
