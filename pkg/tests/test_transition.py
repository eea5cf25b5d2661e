"""Symbolic transition systems: recurrence law, known displays, precision."""

import random
from fractions import Fraction

import pytest

from hassewitt.curve import validate_curve
from hassewitt.polys import IntPoly, RatFunc, poly_gcd
from hassewitt.transition import derive_transition, evaluate_matrix


def _lin(a, b):
    return IntPoly.linear(a, b)


def _c(x):
    return IntPoly.const(x)


def _ratfunc_equal(num1, den1, num2, den2):
    """num1/den1 == num2/den2 as rational functions."""
    return num1 * den2 == num2 * den1


# ---------------------------------------------------------------------------
# Published closed forms, genus 1


def known_quartic(f):
    """4x4 matrix and denominator for y^2 = quartic, f_0 != 0."""
    f0, f1, f2, f3, f4 = f
    J1 = _lin(1, 1) * _lin(2, 1) * f0
    J2 = _lin(1, 1) * _lin(2, 1) * _lin(2, 5) * (f0 * f4)
    J3 = 2 * _lin(1, 1) * _lin(1, 2) * _lin(2, 5) * (f0 * f4)
    J4 = _lin(1, 2) * _lin(2, 5) * f4
    M = [
        [(-(_lin(1, 3)) * f3 * f3 + 4 * _lin(1, 2) * (f2 * f4)) * J1,
         _c(f3) * J2, _c(4 * f4) * J3, _lin(2, 3) * (f1 * f4) * J4],
        [(_c(-2 * f2 * f3) + 6 * _lin(1, 2) * (f1 * f4)) * J1,
         _c(2 * f2) * J2, _c(3 * f3) * J3,
         (4 * _lin(2, 1) * (f0 * f4) + _lin(1, 2) * (f1 * f3)) * J4],
        [(_lin(1, -1) * (f1 * f3) + 8 * _lin(1, 2) * (f0 * f4)) * J1,
         _c(3 * f1) * J2, _c(2 * f2) * J3,
         (3 * _lin(2, 1) * (f0 * f3) + _c(f1 * f2)) * J4],
        [_lin(2, 0) * (f0 * f3) * J1, _c(4 * f0) * J2, _c(f1) * J3,
         (2 * _lin(2, 1) * (f0 * f2) - _lin(1, 0) * (f1 * f1)) * J4],
    ]
    D = 2 * _lin(1, 2) * _lin(2, 1) * _lin(2, 5) * (f0 * f4)
    return M, D


def known_cubic(f):
    """3x3 matrix and denominator for y^2 = cubic, f_0 != 0."""
    f0, f1, f2, f3 = f
    M = [
        [2 * _lin(1, 1) * _lin(2, 1) * (f0 * f2),
         6 * _lin(1, 1) * _lin(1, 3) * (f0 * f3),
         _lin(1, 3) * _lin(1, 2) * (f1 * f3)],
        [4 * _lin(1, 1) * _lin(2, 1) * (f0 * f1),
         4 * _lin(1, 1) * _lin(1, 3) * (f0 * f2),
         _lin(1, 3) * (3 * _lin(2, 1) * (f0 * f3) + _c(f1 * f2))],
        [6 * _lin(1, 1) * _lin(2, 1) * (f0 * f0),
         2 * _lin(1, 1) * _lin(1, 3) * (f0 * f1),
         _lin(1, 3) * (2 * _lin(2, 1) * (f0 * f2) - _lin(1, 0) * (f1 * f1))],
    ]
    D = 2 * _lin(1, 3) * _lin(2, 1) * f0
    return M, D


def known_cubic_f0_zero(f):
    """2x2 matrix and denominator for y^2 = cubic with f_0 = 0."""
    _, f1, f2, f3 = f
    M = [
        [_lin(1, 1) * f2, 2 * _lin(1, 2) * f3],
        [2 * _lin(1, 1) * f1, _lin(1, 2) * f2],
    ]
    D = _lin(1, 2)
    return M, D


def _check_display(coeffs, known):
    cur = validate_curve(coeffs)
    ts = derive_transition(cur, 1)
    M_ref, D_ref = known(coeffs)
    for a in range(cur.r):
        for b in range(cur.r):
            assert _ratfunc_equal(ts.M[a][b], ts.D, M_ref[a][b], D_ref), (a, b)


def test_quartic_display():
    _check_display([3, 5, 7, 11, 13], known_quartic)
    _check_display([1, 1, 1, 1, 1], known_quartic)


def test_cubic_display():
    _check_display([3, 5, 7, 2], known_cubic)
    _check_display([1, 1, 0, 1], known_cubic)


def test_cubic_f0_zero_display():
    _check_display([0, 3, 5, 7], known_cubic_f0_zero)
    _check_display([0, 1, 0, 1], known_cubic_f0_zero)


def test_cubic_f0_zero_at_n0():
    # y^2 = x^3 + x: M(0) = [[0, 4], [2, 0]], D(0) = 2.
    cur = validate_curve([0, 1, 0, 1])
    ts = derive_transition(cur, 1)
    Mn, Dn = evaluate_matrix(ts, 0)
    assert [list(row) for row in Mn] == [[0, 4], [2, 0]]
    assert Dn == 2


# ---------------------------------------------------------------------------
# Published denominator factorizations, genus 2 and 3


def _product(factors, const, extra):
    out = _c(const * extra)
    for a, b in factors:
        out = out * _lin(a, b)
    return out


# (coeff pattern, i, constant, linear factors, coefficient-power extractor)
GENUS23_DENOMS = [
    # genus 2, d=6, f0 != 0
    ([1, 1, 0, 0, 0, 0, 1], 1, 8, [(1, 2), (2, 1), (2, 3), (4, 7), (4, 9)],
     lambda f: f[0] * f[6] ** 3),
    ([1, 1, 0, 0, 0, 0, 1], 2, 8, [(1, 3), (2, 1), (2, 5), (4, 3), (4, 5)],
     lambda f: f[0] ** 3 * f[6]),
    # genus 2, d=5, f0 != 0
    ([1, 1, 0, 3, 0, 1], 1, 6, [(1, 2), (2, 1), (3, 5), (3, 7)],
     lambda f: f[0] * f[5] ** 2),
    ([1, 1, 0, 3, 0, 1], 2, 8, [(1, 4), (2, 1), (4, 3), (4, 5)],
     lambda f: f[0] ** 3),
    # genus 2, d=5, f0 = 0
    ([0, 1, 0, 0, 0, 1], 1, 3, [(1, 2), (3, 4), (3, 5)],
     lambda f: f[5] ** 2),
    ([0, 1, 0, 0, 0, 1], 2, 3, [(1, 3), (3, 2), (3, 4)],
     lambda f: f[1] ** 2),
    # genus 3, d=8, f0 != 0
    ([1, 2, 3, 4, 5, 6, 7, 8, 9], 1, 72,
     [(1, 2), (2, 1), (2, 3), (3, 4), (3, 5), (6, 11), (6, 13)],
     lambda f: f[0] * f[8] ** 5),
    ([1, 2, 3, 4, 5, 6, 7, 8, 9], 2, 8,
     [(1, 2), (2, 1), (2, 5), (4, 3), (4, 5), (4, 7), (4, 9)],
     lambda f: f[0] ** 3 * f[8] ** 3),
    ([1, 2, 3, 4, 5, 6, 7, 8, 9], 3, 72,
     [(1, 3), (2, 1), (2, 7), (3, 2), (3, 4), (6, 5), (6, 7)],
     lambda f: f[0] ** 5 * f[8]),
    # genus 3, d=7, f0 != 0
    ([19, 17, 13, 11, 7, 5, 3, 2], 1, 10,
     [(1, 2), (2, 1), (5, 7), (5, 8), (5, 9), (5, 11)],
     lambda f: f[0] * f[7] ** 4),
    ([19, 17, 13, 11, 7, 5, 3, 2], 2, 24,
     [(1, 2), (2, 1), (3, 7), (3, 8), (4, 3), (4, 5)],
     lambda f: f[0] ** 3 * f[7] ** 2),
    ([19, 17, 13, 11, 7, 5, 3, 2], 3, 72,
     [(1, 5), (2, 1), (3, 2), (3, 4), (6, 5), (6, 7)],
     lambda f: f[0] ** 5),
    # genus 3, d=7, f0 = 0
    ([0, 1, 0, 0, 0, 0, 0, 1], 1, 5,
     [(1, 2), (5, 6), (5, 7), (5, 8), (5, 9)],
     lambda f: f[7] ** 4),
    ([0, 1, 0, 0, 0, 0, 0, 1], 2, 3,
     [(1, 2), (3, 2), (3, 4), (3, 5), (3, 7)],
     lambda f: f[1] ** 2 * f[7] ** 2),
    ([0, 1, 0, 0, 0, 0, 0, 1], 3, 5,
     [(1, 4), (5, 3), (5, 4), (5, 6), (5, 7)],
     lambda f: f[1] ** 4),
]


@pytest.mark.parametrize("coeffs,i,const,factors,cpow", GENUS23_DENOMS)
def test_derived_denominator_divides_known(coeffs, i, const, factors, cpow):
    cur = validate_curve(coeffs)
    ts = derive_transition(cur, i)
    ref = _product(factors, const, cpow(coeffs))
    g = poly_gcd(ts.D.primitive(), ref.primitive())
    assert g == ts.D.primitive(), f"derived denominator does not divide the known one"
    assert ts.D.degree <= cur.d


# ---------------------------------------------------------------------------
# The recurrence law itself, against brute-force polynomial powers


def _window(f, i, r, n):
    coeffs = [1]
    for _ in range(n):
        new = [0] * (len(coeffs) + len(f) - 1)
        for a, x in enumerate(coeffs):
            for b, y in enumerate(f):
                new[a + b] += x * y
        coeffs = new
    def at(k):
        return coeffs[k] if 0 <= k < len(coeffs) else 0
    base = 2 * i * n + i
    return [at(base - r + t) for t in range(r)]


@pytest.mark.parametrize("coeffs", [
    [1, 1, 0, 1], [0, 1, 0, 1], [1, 1, 1, 1, 1], [0, 1, 0, 0, 0, 1],
    [1, 1, 0, 3, 0, 1], [1, 1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0, 0, 1],
    [19, 17, 13, 11, 7, 5, 3, 2], [1, 2, 3, 4, 5, 6, 7, 8, 9],
])
def test_recurrence_reproduces_power_coefficients(coeffs):
    cur = validate_curve(coeffs)
    for i in range(1, cur.g + 1):
        ts = derive_transition(cur, i)
        for n in range(0, 6):
            v = _window(list(coeffs), i, cur.r, n)
            Mn, Dn = evaluate_matrix(ts, n)
            assert Dn != 0
            nxt = [sum(v[a] * Mn[a][b] for a in range(cur.r)) for b in range(cur.r)]
            expect = _window(list(coeffs), i, cur.r, n + 1)
            assert [Fraction(x, Dn) for x in nxt] == [Fraction(x) for x in expect]


def test_random_curves_recurrence():
    rng = random.Random(20240824)
    for _ in range(10):
        d = rng.choice([3, 4, 5, 6, 7, 8])
        while True:
            coeffs = [rng.randint(-9, 9) for _ in range(d + 1)]
            if rng.random() < 0.4:
                coeffs[0] = 0
            try:
                cur = validate_curve(coeffs)
                break
            except Exception:
                continue
        for i in range(1, cur.g + 1):
            ts = derive_transition(cur, i)
            for n in range(0, 4):
                v = _window(coeffs, i, cur.r, n)
                Mn, Dn = evaluate_matrix(ts, n)
                nxt = [sum(v[a] * Mn[a][b] for a in range(cur.r)) for b in range(cur.r)]
                expect = _window(coeffs, i, cur.r, n + 1)
                assert [x * Dn for x in expect] == nxt


def test_precision_parameters():
    # Cubic, f0 != 0: denominator prime to p, no tail shift needed.
    cur = validate_curve([1, 1, 0, 1])
    ts = derive_transition(cur, 1)
    assert (ts.e, ts.w) == (1, 0)
    # Quartic: the factor (2n+5) hits two leaves back.
    cur = validate_curve([1, 1, 1, 1, 1])
    ts = derive_transition(cur, 1)
    assert (ts.e, ts.w) == (1, 2)
    # Safe mode always falls back to e = d+1, w = 0.
    ts = derive_transition(cur, 1, safe_mode=True)
    assert (ts.e, ts.w) == (5, 0)
    # Genus 2 and 3 rows work mod p^g.
    cur = validate_curve([1, 1, 0, 0, 0, 0, 1])
    for i in (1, 2):
        ts = derive_transition(cur, i)
        assert ts.e == 2
    cur = validate_curve([1, 2, 3, 4, 5, 6, 7, 8, 9])
    for i in (1, 2, 3):
        ts = derive_transition(cur, i)
        assert ts.e == 3
