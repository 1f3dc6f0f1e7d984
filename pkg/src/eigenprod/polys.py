"""Univariate polynomials with coefficients in cyclotomic fields.

A polynomial is a list of CyclotomicNumber coefficients, lowest degree first.
Besides exact Euclidean arithmetic this module finds the roots that lie in a
given ring Z[zeta_m] by numeric isolation, rounding and exact confirmation.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

import mpmath
from mpmath import mp

from .cyclotomic import CyclotomicNumber, euler_phi

Poly = list  # list[CyclotomicNumber], low degree first


def as_cyc(v) -> CyclotomicNumber:
    return v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.rational(v)


def trim(p) -> Poly:
    out = [as_cyc(c) for c in p]
    while out and out[-1].is_zero():
        out.pop()
    return out


def degree(p: Poly) -> int:
    return len(trim(p)) - 1


def evaluate(p: Poly, x) -> CyclotomicNumber:
    acc = CyclotomicNumber.zero()
    for c in reversed(p):
        acc = acc * x + c
    return acc


def monic(p: Poly) -> Poly:
    p = trim(p)
    if not p:
        return p
    inv = p[-1].inverse()
    return [c * inv for c in p]


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [CyclotomicNumber.zero()] * max(len(a) - len(b) + 1, 1)
    inv = b[-1].inverse()
    r = list(a)
    while len(r) >= len(b):
        coef = r[-1] * inv
        shift = len(r) - len(b)
        q[shift] = coef
        for i, bc in enumerate(b):
            r[shift + i] = r[shift + i] - coef * bc
        r = trim(r)
    return trim(q), r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return monic(a)


def poly_gcd_many(polys) -> Poly:
    out: Poly = []
    for p in polys:
        out = poly_gcd(out, p) if out else monic(p)
    return out


def derivative(p: Poly) -> Poly:
    return trim([c * i for i, c in enumerate(p)][1:])


def squarefree(p: Poly) -> Poly:
    p = trim(p)
    if len(p) <= 2:
        return monic(p)
    g = poly_gcd(p, derivative(p))
    if len(g) <= 1:
        return monic(p)
    return monic(poly_divmod(p, g)[0])


def conjugate_poly(p: Poly, t: int, order: int) -> Poly:
    return [c.lift(order).conjugate_by(t) for c in p]


def numeric_roots(p: Poly, dps: int = 80) -> list:
    """All complex roots of p at `dps` decimal digits."""
    p = trim(p)
    if len(p) <= 1:
        return []
    with mp.workdps(dps):
        coeffs = [c.to_mpc() for c in reversed(p)]
        if len(coeffs) == 2:
            return [-coeffs[1] / coeffs[0]]
        return list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps + 10 * len(coeffs)))


def _round_in_ring(embedded: list[tuple[int, object]], m: int) -> CyclotomicNumber | None:
    """Integer vector a with sum a_i zeta^(t i) = value for each (t, value), if the fit is tight."""
    n = euler_phi(m)
    rows, rhs = [], []
    for t, val in embedded:
        zs = [mpmath.expj(2 * mpmath.pi * t * i / m) for i in range(n)]
        rows.append([z.real for z in zs])
        rhs.append(mpmath.re(val))
        rows.append([z.imag for z in zs])
        rhs.append(mpmath.im(val))
    A = mpmath.matrix(rows)
    b = mpmath.matrix(rhs)
    try:
        sol = mpmath.lu_solve(A.T * A, A.T * b)
    except ZeroDivisionError:
        return None
    ints = [int(mpmath.nint(s)) for s in sol]
    if any(abs(s - i) > mpmath.mpf(10) ** (-mp.dps // 3) for s, i in zip(sol, ints)):
        return None
    return CyclotomicNumber(m, ints)


def roots_in_ring(p: Poly, m: int, dps: int = 80) -> list[CyclotomicNumber]:
    """Distinct roots of p lying in Z[zeta_m], each confirmed exactly."""
    p = trim(p)
    if len(p) <= 1:
        return []
    M = m
    for c in p:
        M = M * c.order // gcd(M, c.order)
    p = [c.lift(M) for c in p]
    n = euler_phi(m)
    units = [t for t in range(1, m) if gcd(t, m) == 1] or [1]
    reps = []
    for t in units:
        if (m - t) % m not in reps:
            reps.append(t)
    reps = reps[: max(1, (n + 1) // 2)]
    # t acts on Q(zeta_M) through any lift of t mod m coprime to M
    lifts = []
    for t in reps:
        u = t
        while gcd(u, M) != 1:
            u += m
        lifts.append(u)
    found: list[CyclotomicNumber] = []
    with mp.workdps(dps):
        root_sets = [numeric_roots(conjugate_poly(p, u, M) if u != 1 else p, dps) for u in lifts]
        for choice in product(*root_sets):
            cand = _round_in_ring(list(zip(reps, choice)), m)
            if cand is None or any(cand == f for f in found):
                continue
            if evaluate(p, cand).is_zero():
                found.append(cand)
    return found


def roots_of_unity_multiples(p: Poly, radius_base: int, max_exp: int, max_root_order: int = 24, dps: int = 80):
    """Roots x of p with |x| = radius_base^e (0 <= e <= max_exp) and x / |x| a root of unity.

    Returns (x, e) pairs confirmed exactly.
    """
    out = []
    for z in numeric_roots(p, dps):
        with mp.workdps(dps):
            a = abs(z)
            if a == 0:
                continue
            e = int(mpmath.nint(mpmath.log(a, radius_base)))
            if e < 0 or e > max_exp or abs(a - mpmath.mpf(radius_base) ** e) > mpmath.mpf(10) ** (-dps // 3) * a:
                continue
            ang = mpmath.arg(z) / (2 * mpmath.pi)
            frac = Fraction(str(mpmath.nstr(ang, dps // 2))).limit_denominator(max_root_order) % 1
            if abs(ang - mpmath.mpf(frac.numerator) / frac.denominator) > mpmath.mpf(10) ** (-dps // 3) and abs(
                ang + 1 - mpmath.mpf(frac.numerator) / frac.denominator
            ) > mpmath.mpf(10) ** (-dps // 3):
                continue
        x = CyclotomicNumber.root_of_unity(frac.denominator, frac.numerator) * radius_base**e
        if evaluate(p, x).is_zero() and not any(x == y for y, _ in out):
            out.append((x, e))
    return out
