"""Identities h = omega * E_k^{1_1,psi} * g where g vanishes at infinity.

Throughout, f = omega * E_k^{1_1,psi} with omega = -2k/B_{k,psi}, so that
a_f(0) = 1 and a_f(n) = omega sigma_{k-1}^{1_1,psi}(n).  The unknown g has
coefficients c_n (c_1 = 1) and Satake data s_p = p^(l-1) phi(p) = c_p^2 - c_{p^2};
d = f g must be a normalized eigenform of weight k + l and character psi phi.
Writing r_p = p^(k-1) psi(p), its prime-power recursion reads
d_{p^r} = d_p d_{p^(r-1)} - p r_p s_p d_{p^(r-2)}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt, lcm

import sympy
from sympy import factorint, primerange

from . import polys
from .bernoulli import bernoulli_generalized, enumerate_integral_pairs
from .characters import DirichletCharacter, char_group, identify_character, parse_character, trivial
from .cyclotomic import CyclotomicNumber, euler_phi, power_table
from .qseries import EisensteinSpec, QExpansion, eigenform_check, eisenstein_qexp, working_truncation
from .records import IdentityRecord, source_table

__all__ = [
    "Pair",
    "Case1Candidate",
    "DegenerateElimination",
    "admissible_pairs",
    "parse_pair",
    "f_series",
    "caseA_cubic",
    "caseA_cubic_roots",
    "caseB_elimination",
    "caseB_s2_polynomial",
    "reconstruct_g",
    "case1_candidates",
    "evaluate_candidate",
    "match_eisenstein",
    "deligne_violation",
    "discover_case1",
    "search_case1",
]

L_MAX = 40


class DegenerateElimination(ArithmeticError):
    pass


@dataclass(frozen=True)
class Pair:
    k: int
    psi: DirichletCharacter

    @property
    def label(self) -> str:
        return f"{self.k},{self.psi.label}"

    @property
    def modulus(self) -> int:
        return self.psi.canonical_modulus

    @property
    def branch(self) -> str:
        return "A" if self.modulus % 2 == 0 else "B"

    @cached_property
    def omega(self) -> CyclotomicNumber:
        return CyclotomicNumber.rational(-2 * self.k) / bernoulli_generalized(self.k, self.psi)

    def r(self, p: int) -> CyclotomicNumber:
        return self.psi(p) * p ** (self.k - 1)

    @property
    def field_order(self) -> int:
        return max(self.psi.order, 1)


@lru_cache(maxsize=None)
def admissible_pairs() -> tuple[Pair, ...]:
    """The pairs (k, psi) with omega integral, other than (2, 1_1)."""
    out = []
    for ip in enumerate_integral_pairs():
        if ip.k == 2 and ip.character.modulus == 1:
            continue
        out.append(Pair(ip.k, ip.character.canonical))
    return tuple(out)


def parse_pair(text: str) -> Pair:
    """'4,chi_{5,2}' -> the admissible pair with that weight and character."""
    k_text, chi_text = text.split(",", 1)
    k, chi = int(k_text), parse_character(chi_text.strip())
    for pair in admissible_pairs():
        if pair.k == k and pair.psi.is_equivalent(chi):
            return pair
    raise ValueError(f"({text}) is not an admissible pair")


def f_series(pair: Pair, B: int) -> QExpansion:
    """omega * E_k^{1_1,psi}, so the constant term is 1."""
    E = eisenstein_qexp(EisensteinSpec(pair.k, trivial(1), pair.psi), B)
    return E.scale(pair.omega)


# Case A: 2 | N, r_2 = s_2 = 0


def caseA_cubic(pair: Pair) -> list[CyclotomicNumber]:
    """Coefficients (low degree first) of omega c^3 + j2 c^2 + j1 c + j0.

    The j's are the eliminant of the relations at 4, 6, 8, 9, 10 after solving
    for c3, c5, c7 and s3 in turn (r2 = s2 = 0).
    """
    w, r3, r5, r7 = pair.omega, pair.r(3), pair.r(5), pair.r(7)
    j2 = -(w**2) + w * (-2 * r3 + r5 + 2) + 3 * r3**2 + 5 * r3 - 2
    j1 = (
        -(w**2)
        + w * (-3 * r3**3 - 2 * r3**2 + r3 * (3 * r5 + 5) - 2 * r5 + r7 - 1)
        + 3 * r3**4
        + 5 * r3**3
        - r3**2 * (6 * r5 + 8)
        + r3 * (-r5 + 3 * r7 - 4)
        + r5
        - r7
        + 2
    )
    j0 = (
        w**3
        + w**2 * (4 * r3**2 + 2 * r3 - r5 - 4)
        + w * (3 * r3**4 + r3**3 - r3**2 * (6 * r5 + 12) + r3 * (4 * r5 + 3 * r7 - 4) + r5 - 2 * r7 + 5)
        - 3 * r3**5
        - 8 * r3**4
        + r3**3 * (9 * r5 + 6)
        + r3**2 * (12 * r5 - 6 * r7 + 11)
        + r3 * (-3 * r5**2 - 2 * r5 - 4 * r7 + 2)
        + r5**2
        - r5
        + 2 * r7
        - 2
    )
    return [j0, j1, j2, w]


def caseA_cubic_roots(pair: Pair) -> tuple[list[CyclotomicNumber], list[dict]]:
    """Roots of the Case A cubic in Z[zeta_m], plus rejection records for the rest."""
    cubic = caseA_cubic(pair)
    m = pair.field_order
    good = polys.roots_in_ring(cubic, m)
    rejected = []
    for z in polys.numeric_roots(cubic):
        if not any(abs(complex(z) - g.to_complex()) < 1e-20 * (1 + abs(complex(z))) for g in good):
            rejected.append({"pair": pair.label, "root": f"c2~{complex(z):.6g}", "reason": "not an algebraic integer in the working field"})
    return good, rejected


# Case B: the elimination for s_2

_SYMS = sympy.symbols("c2 c3 c5 c7 c11 c13 s2 s3 z")
c2_, c3_, c5_, c7_, c11_, c13_, s2_, s3_, z_ = _SYMS


def _expr(x: CyclotomicNumber, m: int):
    coeffs = x.lift(m).coeffs
    return sum((sympy.Rational(c.numerator, c.denominator) * z_**i for i, c in enumerate(coeffs) if c), sympy.Integer(0))


def _reduce(e, m: int):
    """Expand and reduce powers of z modulo the m-th cyclotomic polynomial."""
    e = sympy.expand(e)
    n = euler_phi(m)
    if n == 1 or not e.has(z_):
        return e
    P = sympy.Poly(e, z_)
    table = power_table(m)
    out = [sympy.Integer(0)] * n
    for (deg,), coef in P.terms():
        row = table[deg % m]
        for i in range(n):
            if row[i]:
                out[i] += row[i] * coef
    return sympy.expand(sum(out[i] * z_**i for i in range(n)))


def _clean(e, m: int):
    e = _reduce(e, m)
    if e == 0:
        return None
    gens = [s for s in _SYMS if e.has(s)]
    if not gens:
        return e
    return sympy.Poly(e, *gens).primitive()[1].as_expr()


@lru_cache(maxsize=None)
def _relations(pair: Pair) -> dict:
    """Multiplicativity of d at the composite indices 4..16 as polynomials."""
    m = pair.field_order
    B = 16
    f = f_series(pair, B)
    a = [_expr(f[n], m) for n in range(B + 1)]
    r = {p: _expr(pair.r(p), m) for p in (2, 3)}
    c = {1: sympy.Integer(1), 2: c2_, 3: c3_, 5: c5_, 7: c7_, 11: c11_, 13: c13_}
    c[4] = c2_**2 - s2_
    c[6] = c2_ * c3_
    c[8] = c2_ * c[4] - s2_ * c2_
    c[9] = c3_**2 - s3_
    c[10] = c2_ * c5_
    c[12] = c[4] * c3_
    c[14] = c2_ * c7_
    c[15] = c3_ * c5_
    c[16] = c2_ * c[8] - s2_ * c[4]
    d = {n: sympy.expand(sum(a[i] * c[n - i] for i in range(n))) for n in range(1, B + 1)}
    R = {
        4: d[4] - (d[2] ** 2 - 2 * r[2] * s2_),
        6: d[6] - d[2] * d[3],
        8: d[8] - (d[2] * d[4] - 2 * r[2] * s2_ * d[2]),
        9: d[9] - (d[3] ** 2 - 3 * r[3] * s3_),
        10: d[10] - d[2] * d[5],
        12: d[12] - d[3] * d[4],
        14: d[14] - d[2] * d[7],
        15: d[15] - d[3] * d[5],
        16: d[16] - (d[2] * d[8] - 2 * r[2] * s2_ * d[4]),
    }
    return {n: _reduce(v, m) for n, v in R.items()}


def _pivot_eliminate(P: list, order: list, m: int) -> list:
    for v in order:
        has = [p for p in P if p.has(v)]
        rest = [p for p in P if not p.has(v)]
        if not has:
            continue
        piv = has[0]
        new = []
        for q in has[1:]:
            res = _clean(sympy.resultant(piv, q, v), m)
            if res is not None:
                new.append(res)
        P = rest + new
    return P


@lru_cache(maxsize=None)
def caseB_elimination(pair: Pair) -> tuple[tuple, tuple]:
    """(polynomials in c2, s2; polynomials in s2 alone) after eliminating the other unknowns.

    c11 and c13 are solved from the relations at 12 and 14 (both linear with
    leading coefficient a_f(1) = omega); then c7, c5, s3, c3 and c2 are removed in
    that order, each time taking resultants of the first polynomial containing
    the variable with every other one.
    """
    m = pair.field_order
    R = _relations(pair)
    inv_w = _expr(pair.omega.inverse(), m)
    sub11 = _reduce(c11_ - R[12] * inv_w, m)
    r14 = _reduce(R[14].subs(c11_, sub11), m)
    sub13 = _reduce(c13_ - r14 * inv_w, m)
    base = []
    for n in (4, 6, 8, 9, 10, 15, 16):
        e = _clean(R[n].subs({c11_: sub11, c13_: sub13}), m)
        if e is not None:
            base.append(e)
    level_c2 = _pivot_eliminate(base, [c7_, c5_, s3_, c3_], m)
    final = _pivot_eliminate(level_c2, [c2_], m)
    final = [p for p in final if not p.has(c2_)]
    if not final:
        raise DegenerateElimination(f"degenerate elimination for pair ({pair.label})")
    return tuple(level_c2), tuple(final)


def _to_cyc(e, m: int) -> CyclotomicNumber:
    if not e.has(z_):
        q = sympy.Rational(e)
        return CyclotomicNumber.rational(Fraction(int(q.p), int(q.q)))
    coeffs = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in reversed(sympy.Poly(e, z_).all_coeffs())]
    return CyclotomicNumber(m, coeffs)


def _s2_poly(e, m: int) -> list[CyclotomicNumber]:
    P = sympy.Poly(e, s2_)
    return [_to_cyc(c, m) for c in reversed(P.all_coeffs())]


def _c2_poly_at(e, m: int, s2: CyclotomicNumber) -> list[CyclotomicNumber]:
    gens = [g for g in (c2_, s2_) if e.has(g)]
    if not gens:
        return [_to_cyc(e, m)]
    P = sympy.Poly(e, c2_, s2_)
    out: dict[int, CyclotomicNumber] = {}
    for (i, j), coef in P.terms():
        term = _to_cyc(coef, m) * s2**j
        out[i] = out.get(i, CyclotomicNumber.zero()) + term
    deg = max(out)
    return [out.get(i, CyclotomicNumber.zero()) for i in range(deg + 1)]


def _normalize(p: list[CyclotomicNumber]) -> list[CyclotomicNumber]:
    p = polys.squarefree(p)
    if all(c.is_rational() for c in p):
        fr = [c.to_fraction() for c in p]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in fr]
        g = 0
        for x in ints:
            g = gcd(g, x)
        sign = 1 if ints[-1] > 0 else -1
        return [CyclotomicNumber.rational(sign * x // g) for x in ints]
    return p


def caseB_s2_polynomial(pair: Pair) -> list[CyclotomicNumber]:
    """The eliminant in s2 of the first pivot chain, squarefree and primitive (low degree first)."""
    if pair.branch != "B":
        raise ValueError("the s2 elimination applies to pairs with odd modulus")
    _, final = caseB_elimination(pair)
    return _normalize(_s2_poly(final[0], pair.field_order))


def caseB_s2_gcd(pair: Pair) -> list[CyclotomicNumber]:
    """Monic gcd of all eliminants in s2; every admissible s2 is one of its roots."""
    _, final = caseB_elimination(pair)
    m = pair.field_order
    return polys.poly_gcd_many([_s2_poly(e, m) for e in final])


def caseB_roots(pair: Pair) -> tuple[list[tuple[CyclotomicNumber, CyclotomicNumber]], list[dict]]:
    """(c2, s2) candidates with |s2| = 2^(l-1), l >= 2, and c2 in the working ring."""
    m = pair.field_order
    level_c2, _ = caseB_elimination(pair)
    G = caseB_s2_gcd(pair)
    rejected = []
    valid = polys.roots_of_unity_multiples(G, 2, L_MAX - 1)
    for z in polys.numeric_roots(G):
        if not any(abs(complex(z) - x.to_complex()) < 1e-20 * (1 + abs(complex(z))) for x, _ in valid):
            rejected.append({"pair": pair.label, "root": f"s2~{complex(z):.6g}", "reason": "absolute value is not a power of 2"})
    out = []
    for s2, e in valid:
        if e < 1:
            rejected.append({"pair": pair.label, "root": f"s2={s2.pretty()}", "reason": "weight 1 for g is out of scope"})
            continue
        cpolys = [_c2_poly_at(p, m, s2) for p in level_c2 if p.has(c2_)]
        cpolys = [p for p in cpolys if polys.degree(p) >= 1]
        G2 = polys.poly_gcd_many(cpolys)
        ring = lcm(m, s2.canonical().order)
        roots = polys.roots_in_ring(G2, ring)
        if not roots:
            rejected.append({"pair": pair.label, "root": f"s2={s2.pretty()}", "reason": "no c2 in the working ring"})
        for c2 in roots:
            out.append((c2, s2))
    return out, rejected


# reconstruction of g


def reconstruct_g(f: QExpansion, c2, s2, B: int) -> QExpansion:
    """Recover c_1..c_B of g from f (a_f(0) = 1), c_2 and s_2.

    Composite indices follow from multiplicativity, prime powers p^r (r >= 3,
    or p = 2) from the recursion with s_p; a prime p and the square p^2 of an
    odd prime come from d_{n+1} = sum_i a_f(i) c_{n+1-i} with every other term
    already determined.
    """
    if f[0] != 1:
        raise ValueError("f must be scaled so that a_f(0) = 1")
    if f.truncation < B + 1:
        raise ValueError(f"f must be known to q^{B + 1}")
    a = f.coeffs
    inv_a1 = a[1].inverse()
    c2 = polys.as_cyc(c2)
    s: dict[int, CyclotomicNumber] = {2: polys.as_cyc(s2)}
    zero = CyclotomicNumber.zero()
    c: list = [zero, CyclotomicNumber.one(), c2] + [None] * (B + 1)

    def r_times_s(p: int) -> CyclotomicNumber:
        return (a[p] * inv_a1 - 1) * s[p] * p

    def c_pp(p: int, e: int) -> CyclotomicNumber:
        n = p**e
        if c[n] is None:
            c[n] = c_pp(p, 1) * c_pp(p, e - 1) - s[p] * c_pp(p, e - 2)
        return c[n]

    def c_mult(m: int) -> CyclotomicNumber:
        if c[m] is not None:
            return c[m]
        val = CyclotomicNumber.one()
        for p, e in factorint(m).items():
            val = val * c_pp(p, e)
        c[m] = val
        return val

    d_prime: dict[int, CyclotomicNumber] = {}

    def d_pp(p: int, e: int) -> CyclotomicNumber:
        if e == 0:
            return CyclotomicNumber.one()
        if e == 1:
            if p not in d_prime:
                d_prime[p] = sum((a[i] * c[p - i] for i in range(p)), zero)
            return d_prime[p]
        return d_pp(p, 1) * d_pp(p, e - 1) - r_times_s(p) * d_pp(p, e - 2)

    def d_mult(m: int) -> CyclotomicNumber:
        val = CyclotomicNumber.one()
        for p, e in factorint(m).items():
            val = val * d_pp(p, e)
        return val

    for n in range(3, B + 1):
        if c[n] is not None:
            continue
        fac = factorint(n)
        if len(fac) > 1:
            c_mult(n)
            continue
        p, e = next(iter(fac.items()))
        if e >= 3 or (e == 2 and p == 2):
            c_pp(p, e)
            continue
        # n = p or n = p^2 with p odd
        m = n + 1
        rest = sum((a[i] * c[m - i] for i in range(2, m)), zero)
        c[n] = (d_mult(m) - c_mult(m) - rest) * inv_a1
        if e == 2:
            s[p] = c[p] * c[p] - c[n]
    return QExpansion(c[: B + 1])


# discovery


@dataclass
class Case1Candidate:
    pair: Pair
    c2: CyclotomicNumber
    s2: CyclotomicNumber
    l: int | None = None
    phi: DirichletCharacter | None = None
    level: int | None = None
    g: QExpansion | None = None
    d: QExpansion | None = None
    status: str = "pending"
    reason: str = ""
    record: IdentityRecord | None = None
    g_spec: EisensteinSpec | None = None
    h_spec: EisensteinSpec | None = None

    def reject(self, reason: str) -> "Case1Candidate":
        self.status, self.reason = "rejected", reason
        return self

    def rejection(self) -> dict:
        return {"pair": self.pair.label, "root": f"c2={self.c2.pretty()}, s2={self.s2.pretty()}", "reason": self.reason}


def case1_candidates(pair: Pair) -> tuple[list[Case1Candidate], list[dict]]:
    if pair.branch == "A":
        roots, rejected = caseA_cubic_roots(pair)
        return [Case1Candidate(pair, c2, CyclotomicNumber.zero()) for c2 in roots], rejected
    found, rejected = caseB_roots(pair)
    return [Case1Candidate(pair, c2, s2) for c2, s2 in found], rejected


def _abs_power(x: CyclotomicNumber, p: int) -> int | None:
    """e with |x| = p^e exactly, else None."""
    sq = x * x.complex_conjugate()
    if not sq.is_rational():
        return None
    v = sq.to_fraction()
    if v.denominator != 1 or v <= 0:
        return None
    n, e = v.numerator, 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1 or e % 2:
        return None
    return e // 2


def _satake(g: QExpansion, s2: CyclotomicNumber) -> dict[int, CyclotomicNumber]:
    out = {2: s2}
    for p in primerange(3, isqrt(g.truncation) + 1):
        out[p] = g[p] * g[p] - g[p * p]
    return out


@lru_cache(maxsize=None)
def _eisenstein_catalogue(N: int, l: int) -> tuple:
    """(descriptor, spec) for E_l^{psi,phi}, psi != 1_1, built from characters of modulus dividing N."""
    chars: dict[tuple, DirichletCharacter] = {}
    for d in range(1, N + 1):
        if N % d:
            continue
        for chi in char_group(d):
            can = chi.canonical
            chars.setdefault(can.function_key, can)
    out = []
    for a in chars.values():
        for b in chars.values():
            spec = EisensteinSpec(l, a, b)
            if N % spec.level == 0 and spec.parity_ok():
                out.append(spec)
    return tuple(out)


def match_eisenstein(g: QExpansion, l: int, N: int, upto: int | None = None) -> EisensteinSpec | None:
    """The E_l^{psi,phi} of level dividing N whose a(1)-normalized expansion agrees with g."""
    upto = min(upto or g.truncation, g.truncation)
    for spec in _eisenstein_catalogue(N, l):
        E = eisenstein_qexp(spec, upto, formal=True)
        if E.first_difference(g, upto) is None:
            return spec
    return None


def deligne_violation(g: QExpansion, l: int, N: int) -> int | None:
    """First prime p not dividing N with |c_p| > 2 p^((l-1)/2), else None."""
    for p in primerange(2, g.truncation):
        if N % p == 0 or g[p].is_zero():
            continue
        if abs(g[p].to_complex()) ** 2 > 4 * p ** (l - 1) * (1 + 1e-12):
            return p
    return None


def evaluate_candidate(cand: Case1Candidate, B: int | None = None) -> Case1Candidate:
    pair = cand.pair
    B0 = B or 200
    f = f_series(pair, B0 + 1)
    g = reconstruct_g(f, cand.c2, cand.s2, B0)
    sat = _satake(g, cand.s2)
    # weight of g from the first nonzero s_p
    l = None
    for p, sp in sat.items():
        if sp.is_zero():
            continue
        e = _abs_power(sp, p)
        if e is None:
            return cand.reject(f"|s_{p}| is not a power of {p}")
        l = e + 1
        break
    if l is None:
        return cand.reject("all s_p vanish; weight undetermined")
    if l < 2:
        return cand.reject("weight 1 for g is out of scope")
    if l > L_MAX:
        return cand.reject(f"weight {l} beyond {L_MAX}")
    values = {}
    for p, sp in sat.items():
        if sp.is_zero():
            values[p] = sp
            continue
        if _abs_power(sp, p) != l - 1:
            return cand.reject(f"|s_{p}| != {p}^{l - 1}")
        values[p] = sp * Fraction(1, p ** (l - 1))
    phis = identify_character(values, (-1) ** l, cap=256)
    if not phis:
        return cand.reject("s_p / p^(l-1) is not a Dirichlet character")
    phi = phis[0]
    N = lcm(pair.modulus, phi.canonical_modulus)
    cand.l, cand.phi, cand.level = l, phi, N
    rng = working_truncation(pair.k + l, N)
    if B is None and rng > B0:
        f = f_series(pair, rng + 1)
        g = reconstruct_g(f, cand.c2, cand.s2, rng)
    elif rng > B0:
        rng = B0
    d = f.truncate(g.truncation) * g
    cand.g, cand.d = g, d
    rep = eigenform_check(g, l, phi, rng)
    if not rep:
        return cand.reject(f"g fails the eigenform recursion at n = {rep.first_violation}")
    rep = eigenform_check(d, pair.k + l, pair.psi * phi, rng)
    if not rep:
        return cand.reject(f"f g fails the eigenform recursion at n = {rep.first_violation}")
    # a non-Eisenstein eigenform vanishing at infinity is a newform-type cusp form
    cand.g_spec = match_eisenstein(g, l, N)
    if cand.g_spec is None and (p := deligne_violation(g, l, N)) is not None:
        return cand.reject(f"g is not Eisenstein and |c_{p}| exceeds the Deligne bound")
    cand.h_spec = match_eisenstein(d, pair.k + l, N)
    if cand.h_spec is None and (p := deligne_violation(d, pair.k + l, N)) is not None:
        return cand.reject(f"f g is not Eisenstein and |d_{p}| exceeds the Deligne bound")
    cand.status = "verified"
    cand.record = _record(cand)
    return cand


def cusp_descriptor(weight: int, N: int, chi: DirichletCharacter) -> str:
    if chi.conductor == 1:
        return f"Delta_{{{weight},{N}}}"
    return f"Delta_{{{weight},{N},{chi.label}}}"


def _record(cand: Case1Candidate) -> IdentityRecord:
    pair, l, N = cand.pair, cand.l, cand.level
    f_desc = EisensteinSpec(pair.k, trivial(1), pair.psi).descriptor()
    g_desc = cand.g_spec.descriptor() if cand.g_spec else cusp_descriptor(l, N, cand.phi)
    h_desc = cand.h_spec.descriptor() if cand.h_spec else cusp_descriptor(pair.k + l, N, (pair.psi * cand.phi).canonical)
    return IdentityRecord(
        id=f"N{N}_w{pair.k}+{l}_{pair.psi.label}_{cand.phi.label}",
        level=N,
        k=pair.k,
        l=l,
        psi=pair.psi.label,
        phi=cand.phi.label,
        f=f_desc,
        g=g_desc,
        h=h_desc,
        scalar=pair.omega,
        case=f"case1_{pair.branch}",
        table=source_table(N, f"case1_{pair.branch}", pair.k, l),
    )


def discover_case1(pair: Pair, B: int | None = None) -> list[IdentityRecord]:
    cands, _ = case1_candidates(pair)
    return [c.record for c in (evaluate_candidate(c, B) for c in cands) if c.status == "verified"]


def search_case1(pairs=None, B: int | None = None) -> tuple[list[Case1Candidate], list[dict]]:
    """Run every admissible pair; returns the verified candidates and all rejections."""
    verified, rejected = [], []
    for pair in pairs or admissible_pairs():
        cands, rej = case1_candidates(pair)
        rejected.extend(rej)
        for c in cands:
            evaluate_candidate(c, B)
            if c.status == "verified":
                verified.append(c)
            else:
                rejected.append(c.rejection())
    verified.sort(key=lambda c: (c.level, c.pair.k + c.l, c.pair.k, c.pair.psi.label, c.phi.label))
    return verified, rejected
