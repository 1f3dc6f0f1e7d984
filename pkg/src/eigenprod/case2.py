"""Identities E_k^{1,psi} * E_l^{1,phi} = (alpha + beta) E_{k+l}^{1,psi phi}, l >= k >= 2.

Here alpha = -B_{k,psi}/2k, beta = -B_{l,phi}/2l, gamma = -B_{k+l,psi phi}/2(k+l),
r_p = p^(k-1) psi(p) and s_p = p^(l-1) phi(p).  Both characters are read modulo
the common level N, so they vanish at the same primes.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod

from mpmath import iv
from sympy import factorint, primerange

from . import polys
from .bernoulli import bernoulli_classical, bernoulli_generalized, bound_C
from .characters import DirichletCharacter, canonical_characters, identify_character, trivial
from .cyclotomic import CyclotomicNumber, ivprec
from .qseries import EisensteinSpec, eisenstein_qexp, working_truncation
from .records import IdentityRecord, source_table

__all__ = [
    "Case2Candidate",
    "Case2Search",
    "evaluate_relations",
    "series_relation",
    "r2_polynomial",
    "valid_r2_roots",
    "bound_D",
    "D_exact",
    "infer_psi",
    "principal_levels",
    "level_one_weight_pairs",
    "search_case2",
    "run_case2",
]

PRIMES_FOR_PSI = 50


def _alpha(k: int, chi: DirichletCharacter) -> CyclotomicNumber:
    return bernoulli_generalized(k, chi) * Fraction(-1, 2 * k)


@dataclass
class Case2Candidate:
    k: int
    l: int
    psi: DirichletCharacter
    phi: DirichletCharacter
    status: str = "pending"
    reason: str = ""

    @cached_property
    def level(self) -> int:
        return lcm(self.psi.canonical_modulus, self.phi.canonical_modulus)

    @cached_property
    def psi_n(self) -> DirichletCharacter:
        return self.psi.lift(self.level)

    @cached_property
    def phi_n(self) -> DirichletCharacter:
        return self.phi.lift(self.level)

    @cached_property
    def product(self) -> DirichletCharacter:
        return self.psi_n * self.phi_n

    @cached_property
    def alpha(self) -> CyclotomicNumber:
        return _alpha(self.k, self.psi_n)

    @cached_property
    def beta(self) -> CyclotomicNumber:
        return _alpha(self.l, self.phi_n)

    @cached_property
    def gamma(self) -> CyclotomicNumber:
        return _alpha(self.k + self.l, self.product)

    def r(self, p: int) -> CyclotomicNumber:
        return self.psi_n(p) * p ** (self.k - 1)

    def s(self, p: int) -> CyclotomicNumber:
        return self.phi_n(p) * p ** (self.l - 1)

    @property
    def scalar(self) -> CyclotomicNumber:
        """c in h = c f g for the a(1)-normalized forms."""
        return (self.alpha + self.beta).inverse()

    def reject(self, reason: str) -> "Case2Candidate":
        self.status, self.reason = "rejected", reason
        return self

    def record(self) -> IdentityRecord:
        N = self.level
        return IdentityRecord(
            id=f"N{N}_w{self.k}+{self.l}_{self.psi.label}_{self.phi.label}",
            level=N,
            k=self.k,
            l=self.l,
            psi=self.psi.label,
            phi=self.phi.label,
            f=EisensteinSpec(self.k, trivial(1), self.psi).descriptor(),
            g=EisensteinSpec(self.l, trivial(1), self.phi).descriptor(),
            h=EisensteinSpec(self.k + self.l, trivial(1), self.product.canonical).descriptor(),
            scalar=self.scalar,
            case="case2",
            table=source_table(N, "case2", self.k, self.l),
        )


def relation_sides(cand: Case2Candidate) -> dict[int, tuple[CyclotomicNumber, CyclotomicNumber]]:
    """Left and right sides of the q^0, q^2, q^3, q^4 and q^8 coefficient relations."""
    a, b, g = cand.alpha, cand.beta, cand.gamma
    r2, r3, r5, r7 = (cand.r(p) for p in (2, 3, 5, 7))
    s2, s3, s5, s7 = (cand.s(p) for p in (2, 3, 5, 7))
    ab = a + b
    return {
        20: (g * ab, a * b),
        21: (2 * r2 * s2 * ab, 1 + a * s2 + b * r2),
        22: (3 * r3 * s3 * ab, 2 + a * s3 + b * r3 + r2 + s2),
        23: (4 * r2**2 * s2**2 * ab, 2 + a * s2**2 + b * r2**2 + r2 + s2 + r2 * s2 + r3 + s3),
        24: (
            8 * r2**3 * s2**3 * ab,
            4
            + a * s2**3
            + b * r2**3
            + r2**2 * (s2**2 + s2 + 1)
            + s2**2 * (r2 + 1)
            + r2 * (r3 + r3 * s2 + s2 * s3 + 2 * s2 + s3 + 2)
            + s2 * (r3 + s3 + 2)
            + r3 * (s5 + 1)
            + r5 * (s3 + 1)
            + r7
            + s3
            + s5
            + s7,
        ),
    }


def evaluate_relations(cand: Case2Candidate) -> dict[int, bool]:
    """Exact pass/fail for each of the five coefficient relations."""
    if cand.psi.parity != (-1) ** cand.k or cand.phi.parity != (-1) ** cand.l:
        raise ValueError("parity of a character does not match its weight")
    return {n: lhs == rhs for n, (lhs, rhs) in relation_sides(cand).items()}


def series_relation(cand: Case2Candidate, m: int) -> CyclotomicNumber:
    """[q^m] of f g - (alpha + beta) E_{k+l}, straight from the expansions."""
    f = eisenstein_qexp(EisensteinSpec(cand.k, trivial(1), cand.psi_n), m + 1, formal=True)
    g = eisenstein_qexp(EisensteinSpec(cand.l, trivial(1), cand.phi_n), m + 1, formal=True)
    h = eisenstein_qexp(EisensteinSpec(cand.k + cand.l, trivial(1), cand.product), m + 1, formal=True)
    return (f * g - h.scale(cand.alpha + cand.beta))[m]


def verify_candidate(cand: Case2Candidate, terms: int | None = None) -> bool:
    """The full identity through max(Sturm bound, 200) coefficients."""
    N = cand.level
    B = max(terms or 0, working_truncation(cand.k + cand.l, N))
    f = eisenstein_qexp(EisensteinSpec(cand.k, trivial(1), cand.psi_n), B, formal=True)
    g = eisenstein_qexp(EisensteinSpec(cand.l, trivial(1), cand.phi_n), B, formal=True)
    h = eisenstein_qexp(EisensteinSpec(cand.k + cand.l, trivial(1), cand.product), B, formal=True)
    return (f * g).first_difference(h.scale(cand.alpha + cand.beta), B) is None


# the r2 cubic and the bound D


def r2_polynomial(beta, s2, s3) -> list[CyclotomicNumber]:
    """[j0, j1, j2, j3] of j3 r2^3 + j2 r2^2 + j1 r2 + j0 (alpha and r3 eliminated)."""
    b, s2, s3 = polys.as_cyc(beta), polys.as_cyc(s2), polys.as_cyc(s3)
    j3 = b**2 * (4 * s2**2 - 2 * s2 * (3 * s3 + 1) + 3 * s3)
    j2 = b**2 * (-4 * s2**3 + 12 * s2**2 * s3 + s2 * (1 - 6 * s3)) + b * (2 * s2**2 - s2 * (9 * s3 + 2) + 6 * s3) + 2 * s2
    j1 = (
        b**2 * (2 * s2**3 * (1 - 3 * s3) + s2**2 * (3 * s3 - 1))
        + b * (s2**2 * (9 * s3 - 1) - s2 * (10 * s3 + 3) + 3 * s3**2 + 7 * s3)
        + 2 * s2**2
        + 3 * s2 * (1 - s3)
        + 3 * s3
    )
    j0 = b * s2 * (2 - 3 * s3**2 - 5 * s3) - s2**2 - 2 * s2 + 3 * s3**2 + 7 * s3
    return [j0, j1, j2, j3]


def valid_r2_roots(poly: list[CyclotomicNumber], max_weight: int = 40) -> list[tuple[CyclotomicNumber, int]]:
    """Roots r2 = 2^(k-1) * (root of unity), confirmed exactly, as (r2, k) with k >= 1."""
    return [(x, e + 1) for x, e in polys.roots_of_unity_multiples(poly, 2, max_weight - 1)]


def D_exact(k: int, l: int) -> Fraction:
    if not l > k > 1:
        raise ValueError("D(k, l) needs l > k > 1")
    e3 = 6 * 2 ** (2 * l - 2) + 2**l + 2
    e2 = 2 ** (2 * l - 2) + 3 ** (k - 1) * 2**l + 3 ** (l - 1) * 2**l + 3 * 2 ** (l - 1) + 2 * 3 ** (k - 1) + 2 * 3 ** (l - 1) + 3
    e1 = (
        2 ** (2 * l - 2)
        + 3 ** (k - 1) * 2 ** (l - 1)
        + 2 ** (l - 1) * 3 ** (l - 1)
        + 2**l
        + 2 * 3 ** (k - 1) * 5 ** (l - 1)
        + 3 ** (k - 1)
        + 2 * 5 ** (k - 1) * 3 ** (l - 1)
        + 2 * 5 ** (k - 1)
        + 2 * 7 ** (k - 1)
        + 3 ** (l - 1)
        + 2 * 5 ** (l - 1)
        + 2 * 7 ** (l - 1)
        + 6
    )
    e0 = (
        3 ** (k - 1) * 2 ** (l - 1)
        + 2 ** (l - 1) * 3 ** (l - 1)
        + 2**l
        + 3 ** (k - 1) * 5 ** (l - 1)
        + 3 ** (k - 1)
        + 5 ** (k - 1) * 3 ** (l - 1)
        + 5 ** (k - 1)
        + 7 ** (k - 1)
        + 3 ** (l - 1)
        + 5 ** (l - 1)
        + 7 ** (l - 1)
        + 4
    )
    den = 8**l * 4**k - 8**k * 4**l - 8**l - 8**k - 4**l - 4**k
    num = 4**k * e3 + 2 ** (k + 1) * e2 + 4 * e1 + Fraction(2) ** (3 - k) * e0
    return Fraction(num) / den


def bound_D(k: int, l: int, precision_bits: int = 256):
    """D(k, l) as an interval; |B_{l,phi}/2l| <= D(k, l) in any identity with weights k < l."""
    q = D_exact(k, l)
    with ivprec(precision_bits):
        return iv.mpf(q.numerator) / q.denominator


# recovering psi from (l, phi, r2)


def _sigma_from(vals: dict[int, CyclotomicNumber], n: int) -> CyclotomicNumber:
    out = CyclotomicNumber.one()
    for p, e in factorint(n).items():
        x = vals[p]
        term, acc = CyclotomicNumber.one(), CyclotomicNumber.one()
        for _ in range(e):
            term = term * x
            acc = acc + term
        out = out * acc
    return out


def infer_psi(beta, phi: DirichletCharacter, l: int, r2, *, level_cap: int = 256, prime_bound: int = PRIMES_FOR_PSI):
    """alpha from the q^2 relation, then r_3, r_5, ... each linear in the next unknown.

    Returns (alpha, {p: r_p}, characters psi matching the r_p and alpha).
    """
    beta, r2 = polys.as_cyc(beta), polys.as_cyc(r2)
    s = {p: phi(p) * p ** (l - 1) for p in primerange(2, prime_bound + 1)}
    denom = s[2] * (2 * r2 - 1)
    if denom.is_zero():
        raise ArithmeticError("the q^2 relation does not determine alpha")
    alpha = (1 + beta * r2 * (1 - 2 * s[2])) * denom.inverse()
    ab = alpha + beta
    r = {2: r2}
    for p in primerange(3, prime_bound + 1):
        # [q^p]: alpha a_g(p) + beta a_f(p) + sum a_f(i) a_g(p-i) = (alpha+beta)(1 + p r_p s_p)
        S = sum((_sigma_from(r, i) * _sigma_from(s, p - i) for i in range(1, p)), CyclotomicNumber.zero())
        den = ab * s[p] * p - beta
        if den.is_zero():
            raise ArithmeticError(f"the q^{p} relation does not determine r_{p}")
        r[p] = (alpha * s[p] + S) * den.inverse()
    x = r2 * r2.complex_conjugate()
    k = None
    if x.is_rational() and x.to_fraction().denominator == 1:
        v = x.to_fraction().numerator
        e = v.bit_length() - 1
        if v == 1 << e and e % 2 == 0:
            k = e // 2 + 1
    psis: list[DirichletCharacter] = []
    if k is not None:
        values = {}
        ok = True
        for p, rp in r.items():
            v = rp * Fraction(1, p ** (k - 1))
            if not v.is_zero() and (v * v.complex_conjugate()) != 1:
                ok = False
                break
            values[p] = v
        if ok:
            for chi in identify_character(values, (-1) ** k, cap=level_cap):
                if _alpha(k, chi) == alpha:
                    psis.append(chi)
    return alpha, r, psis


def principal_levels(k: int, alpha, prime_cap: int = 1000) -> list[int]:
    """Squarefree N > 1 with -B_k/2k * prod_{p | N} (1 - p^(k-1)) = alpha."""
    alpha = polys.as_cyc(alpha)
    if not alpha.is_rational():
        return []
    target = alpha.to_fraction() / Fraction(-bernoulli_classical(k), 2 * k)
    if target.denominator != 1 or target == 0:
        return []
    t = target.numerator
    out = []

    def rec(rest: int, primes: list[int], start: int):
        if rest == 1 and primes:
            out.append(prod(primes))
        for p in primerange(start, prime_cap + 1):
            fac = 1 - p ** (k - 1)
            if abs(fac) > abs(rest):
                break
            if rest % fac == 0:
                rec(rest // fac, primes + [p], p + 1)

    rec(t, [], 2)
    return sorted(out)


def level_one_weight_pairs(weight_cap: int = 60) -> list[tuple[int, int]]:
    """Even k <= l with (k+l) B_k B_l / (l B_k + k B_l) = B_{k+l}."""
    out = []
    for k in range(4, weight_cap + 1, 2):
        for l in range(k, weight_cap + 1 - k, 2):
            Bk, Bl = bernoulli_classical(k), bernoulli_classical(l)
            if (k + l) * Bk * Bl == bernoulli_classical(k + l) * (l * Bk + k * Bl):
                out.append((k, l))
    return out


# the search


@dataclass
class Case2Search:
    """Outcome of the finite search: verified tuples, identities and a per-branch log."""

    tuples: list[Case2Candidate] = field(default_factory=list)
    rejected: list[Case2Candidate] = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    @property
    def records(self) -> list[IdentityRecord]:
        seen: dict[tuple, IdentityRecord] = {}
        for c in self.tuples:
            key = (c.level, c.k + c.l, frozenset([(c.k, c.psi.function_key), (c.l, c.phi.function_key)]))
            if key in seen:
                seen[key].notes.append(f"also reached as the tuple ({c.k}, {c.psi.label}; {c.l}, {c.phi.label})")
            else:
                seen[key] = c.record()
        return list(seen.values())


def _support(chi: DirichletCharacter) -> frozenset:
    return frozenset(factorint(chi.canonical_modulus))


def _universe(level_cap: int, include: int | None = None, exclude: tuple = (2,)) -> list[DirichletCharacter]:
    out = []
    for chi in canonical_characters(level_cap):
        sup = _support(chi)
        if any(p in sup for p in exclude):
            continue
        if include is not None and include not in sup:
            continue
        out.append(chi)
    return out


class _AlphaIndex:
    """Characters of one weight, grouped by support, sorted by |alpha| for tolerance lookups."""

    def __init__(self, k: int, chars):
        self.k = k
        groups: dict[frozenset, list] = {}
        for chi in chars:
            if chi.parity != (-1) ** k:
                continue
            a = _alpha(k, chi)
            groups.setdefault(_support(chi), []).append((abs(a.to_complex()), a, chi))
        self.groups = {S: sorted(v, key=lambda t: t[0]) for S, v in groups.items()}
        self.keys = {S: [t[0] for t in v] for S, v in self.groups.items()}

    def lookup(self, support: frozenset, alpha: complex, rel: float = 1e-9):
        items = self.groups.get(support, [])
        keys = self.keys.get(support, [])
        m = abs(alpha)
        lo, hi = bisect_left(keys, m * (1 - rel) - 1e-300), bisect_right(keys, m * (1 + rel) + 1e-300)
        return [(a, chi) for _, a, chi in items[lo:hi] if abs(a.to_complex() - alpha) <= rel * max(m, 1e-300)]


def _finish(cand: Case2Candidate, out: Case2Search) -> None:
    rel = evaluate_relations(cand)
    if not all(rel.values()):
        failed = ", ".join(str(n) for n, ok in rel.items() if not ok)
        out.rejected.append(cand.reject(f"relations {failed} fail"))
        return
    if not verify_candidate(cand):
        out.rejected.append(cand.reject("expansion mismatch below the Sturm range"))
        return
    cand.status = "verified"
    out.tuples.append(cand)


def _level_one(out: Case2Search, weight_cap: int) -> None:
    pairs = level_one_weight_pairs(weight_cap)
    out.log.append(f"N = 1: the q^0 relation holds exactly for weights {pairs}")
    one = trivial(1)
    for k, l in pairs:
        _finish(Case2Candidate(k, l, one, one), out)


def _three_divides(out: Case2Search, level_cap: int, weight_cap: int) -> None:
    """r3 = s3 = 0, so r2 + s2 = -2 with |r2| = 2^(k-1), |s2| = 2^(l-1)."""
    sols = []
    for a in range(1, weight_cap):
        for b in range(a, weight_cap - a):
            # |2 + 2^a u|^2 = 4^b  <=>  Re(u) = (4^b - 4 - 4^a) / 2^(a+2)
            re = Fraction(4**b - 4 - 4**a, 2 ** (a + 2))
            if re not in (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)):
                continue
            order = {Fraction(1): 1, Fraction(-1): 2, Fraction(0): 4, Fraction(1, 2): 6, Fraction(-1, 2): 3}[re]
            for t in range(order):
                if gcd(t, order) != 1:
                    continue
                u = CyclotomicNumber.root_of_unity(order, t)
                r2 = u * 2**a
                s2 = -2 - r2
                if (s2 * s2.complex_conjugate()) == 4**b and not any(r2 == x and s2 == y for x, y, *_ in sols):
                    sols.append((r2, s2, a + 1, b + 1))
    out.log.append("3 | N: r2 + s2 = -2 has the solutions " + ", ".join(f"(r2={x.pretty()}, s2={y.pretty()})" for x, y, *_ in sols))
    pool = _universe(level_cap, include=3)
    for r2, s2, k, l in sols:
        # alpha, beta from the q^2 and q^4 relations with r3 = s3 = 0
        m11, m12, v1 = 2 * r2 * s2 - s2, 2 * r2 * s2 - r2, CyclotomicNumber.one()
        m21, m22, v2 = 4 * r2**2 * s2**2 - s2**2, 4 * r2**2 * s2**2 - r2**2, 2 + r2 + s2 + r2 * s2
        det = m11 * m22 - m12 * m21
        if det.is_zero():
            out.log.append(f"3 | N: singular system for r2={r2.pretty()}")
            continue
        alpha = (v1 * m22 - m12 * v2) * det.inverse()
        beta = (m11 * v2 - m21 * v1) * det.inverse()
        out.log.append(f"3 | N: k={k}, l={l}: alpha={alpha.pretty()}, beta={beta.pretty()}")
        psis = [c for c in pool if c.parity == (-1) ** k and c(2) * 2 ** (k - 1) == r2 and _alpha(k, c) == alpha]
        phis = [c for c in pool if c.parity == (-1) ** l and c(2) * 2 ** (l - 1) == s2 and _alpha(l, c) == beta]
        for psi in psis:
            for phi in phis:
                if _support(psi) == _support(phi):
                    _finish(Case2Candidate(k, l, psi, phi), out)


def _coprime_to_six(level_cap: int) -> list[DirichletCharacter]:
    return [c for c in _universe(level_cap, exclude=(2, 3)) if c.canonical_modulus > 1]


def _equal_weights(out: Case2Search, level_cap: int, weight_cap: int) -> None:
    pool = _coprime_to_six(level_cap)
    for k in range(2, weight_cap // 2 + 1):
        index = _AlphaIndex(k, pool)
        # 2-adic filter: with k >= 3 every alpha has 2^(k-2) alpha integral, with k = 2 every
        # nontrivial alpha is integral, and then the q^2 relation cannot equal 1
        filt = 0
        for S, items in index.groups.items():
            for _, a, chi in items:
                if k >= 3 and (a * 2 ** (k - 2)).is_algebraic_integer():
                    filt += 1
                elif k == 2 and chi.conductor > 1 and a.is_algebraic_integer():
                    filt += 1
        total = sum(len(v) for v in index.groups.values())
        hits = 0
        w = 2 ** (k - 1)
        for S, items in index.groups.items():
            units = {complex(round(z.real, 9), round(z.imag, 9)) for z in (c(2).to_complex() for _, _, c in items)}
            for _, beta, phi in items:
                b, s2 = beta.to_complex(), phi(2).to_complex() * w
                for u in units:
                    r2 = u * w
                    # alpha from the q^2 relation, numerically first
                    target = (1 + b * r2 * (1 - 2 * s2)) / (s2 * (2 * r2 - 1))
                    for a, psi in index.lookup(S, target):
                        if abs(psi(2).to_complex() - u) > 1e-9:
                            continue
                        R2, S2 = psi(2) * w, phi(2) * w
                        if a * S2 * (2 * R2 - 1) != 1 + beta * R2 * (1 - 2 * S2):
                            continue
                        hits += 1
                        _finish(Case2Candidate(k, k, psi, phi), out)
        out.log.append(f"k = l = {k}: {total} characters, 2-adic filter excludes {filt}, exhaustive q^2 matches {hits}")


def _dmax(l: int):
    return max(bound_D(k, l, 128).b for k in range(2, l))


def _beta_lower(l: int, chi: DirichletCharacter):
    f = chi.conductor
    low = bound_C(l, f, 128).a
    for p in _support(chi):
        if f % p:
            low = low * (iv.mpf(p) ** (l - 1) - 1).a
    return low


def _unequal_weights(out: Case2Search, level_cap: int, weight_cap: int) -> None:
    pool = _coprime_to_six(level_cap)
    for l in range(3, weight_cap - 1):
        dmax = _dmax(l)
        survivors = [phi for phi in pool if phi.parity == (-1) ** l and _beta_lower(l, phi) <= dmax]
        if not survivors:
            continue
        names = []
        for phi in survivors:
            beta = _alpha(l, phi)
            if abs(beta.to_complex()) > float(dmax):
                continue
            names.append(phi.label)
            poly = r2_polynomial(beta, phi(2) * 2 ** (l - 1), phi(3) * 3 ** (l - 1))
            roots = valid_r2_roots(poly, l)
            out.log.append(
                f"l = {l}, phi = {phi.label}: valid r2 roots "
                + (", ".join(f"{x.pretty()} (k={k})" for x, k in roots) or "none")
            )
            for r2, k in roots:
                if not 2 <= k < l or k + l > weight_cap:
                    continue
                _, _, psis = infer_psi(beta, phi, l, r2, level_cap=level_cap)
                for psi in psis:
                    if _support(psi) == _support(phi):
                        _finish(Case2Candidate(k, l, psi, phi), out)
        out.log.append(f"l = {l}: D bound {float(dmax):.4f} leaves {names or 'nothing'}")


def run_case2(level_cap: int = 100, weight_cap: int = 30) -> Case2Search:
    """All branches in order; weight_cap bounds k + l, level_cap bounds the level."""
    out = Case2Search()
    _level_one(out, weight_cap)
    out.log.append("2 | N: r2 = s2 = 0 turns the q^2 relation into 0 = 1")
    _three_divides(out, level_cap, weight_cap)
    _equal_weights(out, level_cap, weight_cap)
    _unequal_weights(out, level_cap, weight_cap)
    out.tuples.sort(key=lambda c: (c.level, c.k + c.l, c.k, c.psi.label, c.phi.label))
    return out


def search_case2(level_cap: int = 100, weight_cap: int = 30) -> list[IdentityRecord]:
    return run_case2(level_cap, weight_cap).records
