"""Truncated q-expansions with cyclotomic coefficients.

Covers twisted divisor sums, Eisenstein series E_k^{psi,phi}, the Moebius lift
to imprimitive characters, products, Hecke operators, the eigenform recursions
and the Sturm bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd, lcm
from typing import Iterable, NamedTuple

import numpy as np
from sympy import factorint, mobius

from .bernoulli import bernoulli_generalized
from .characters import DirichletCharacter, trivial
from .cyclotomic import CyclotomicNumber, euler_phi, power_table

__all__ = [
    "FormMeta",
    "QExpansion",
    "EisensteinSpec",
    "ParityError",
    "EigenReport",
    "sigma_twisted",
    "eisenstein_qexp",
    "eisenstein_lift",
    "qexp_mul",
    "hecke_apply",
    "eigenform_check",
    "sturm_bound",
    "working_truncation",
]


class ParityError(ValueError):
    pass


class FormMeta(NamedTuple):
    weight: int
    level: int | None = None
    character: DirichletCharacter | None = None


def _cyc(v) -> CyclotomicNumber:
    return v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.rational(v)


class QExpansion:
    """sum_{n=0}^{B} a(n) q^n, with B the truncation."""

    def __init__(self, coeffs: Iterable, meta: FormMeta | None = None):
        self.coeffs: tuple[CyclotomicNumber, ...] = tuple(_cyc(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("an expansion needs at least the constant term")
        self.meta = meta

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, B: int) -> "QExpansion":
        if B > self.truncation:
            raise ValueError(f"cannot extend an expansion known to q^{self.truncation} up to q^{B}")
        return QExpansion(self.coeffs[: B + 1], self.meta)

    def _binary(self, other, op):
        B = min(self.truncation, other.truncation)
        return QExpansion([op(a, b) for a, b in zip(self.coeffs[: B + 1], other.coeffs[: B + 1])])

    def __add__(self, other: "QExpansion"):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other: "QExpansion"):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return QExpansion([-a for a in self.coeffs], self.meta)

    def scale(self, c) -> "QExpansion":
        c = _cyc(c)
        return QExpansion([c * a for a in self.coeffs], self.meta)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return qexp_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def dilate(self, d: int) -> "QExpansion":
        """f(dz), kept to the same truncation."""
        zero = CyclotomicNumber.zero()
        out = [zero] * (self.truncation + 1)
        for n in range(0, self.truncation // d + 1):
            out[n * d] = self.coeffs[n]
        return QExpansion(out)

    def first_difference(self, other: "QExpansion", upto: int | None = None) -> int | None:
        """Smallest n <= upto with differing coefficients, or None."""
        B = min(self.truncation, other.truncation)
        if upto is not None:
            if upto > B:
                raise ValueError(f"comparison to q^{upto} needs both expansions that long (have {B})")
            B = upto
        for n in range(B + 1):
            if self.coeffs[n] != other.coeffs[n]:
                return n
        return None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def pretty(self, terms: int | None = None) -> str:
        B = self.truncation if terms is None else min(terms, self.truncation)
        parts = []
        for n in range(B + 1):
            c = self.coeffs[n]
            if c.is_zero():
                continue
            s = c.pretty()
            if n == 0:
                parts.append(s)
                continue
            mono = "q" if n == 1 else f"q^{n}"
            if s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            elif c.is_rational():
                parts.append(f"{s}{mono}" if "/" not in s else f"({s}){mono}")
            else:
                parts.append(f"({s}){mono}")
        text = " + ".join(parts) if parts else "0"
        return text.replace("+ -", "- ") + f" + O(q^{B + 1})"

    def __repr__(self):
        return f"QExpansion({self.pretty(8)})"


@dataclass(frozen=True)
class EisensteinSpec:
    k: int
    psi: DirichletCharacter
    phi: DirichletCharacter

    def parity_ok(self) -> bool:
        return self.psi.parity * self.phi.parity == (-1) ** self.k

    @property
    def level(self) -> int:
        return self.psi.canonical_modulus * self.phi.canonical_modulus

    @property
    def nebentypus(self) -> DirichletCharacter:
        return self.psi * self.phi

    def descriptor(self) -> str:
        return f"E{self.k}^{{{self.psi.label},{self.phi.label}}}"


def sigma_twisted(kminus1: int, psi: DirichletCharacter, phi: DirichletCharacter, n: int) -> CyclotomicNumber:
    """sum_{d | n} psi(n/d) phi(d) d^(k-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return _sigma_table(kminus1, psi, phi, n)[n]


def _sigma_raw(kminus1: int, psi: DirichletCharacter, phi: DirichletCharacter, B: int):
    """Raw power coordinates of sigma(n) for n <= B at order lcm(ord psi, ord phi)."""
    o = lcm(psi.order, phi.order)
    a, b = o // psi.order, o // phi.order
    pt, ft = psi.exponent_table, phi.exponent_table
    pm, fm = psi.modulus, phi.modulus
    raw = [[0] * o for _ in range(B + 1)]
    for d in range(1, B + 1):
        ed = ft[d % fm]
        if ed is None:
            continue
        w = d**kminus1
        for m in range(1, B // d + 1):
            em = pt[m % pm]
            if em is None:
                continue
            raw[m * d][(ed * b + em * a) % o] += w
    return o, raw


@lru_cache(maxsize=256)
def _sigma_table(kminus1: int, psi: DirichletCharacter, phi: DirichletCharacter, B: int):
    o, raw = _sigma_raw(kminus1, psi, phi, B)
    return [None] + [CyclotomicNumber.from_raw(o, raw[n]) for n in range(1, B + 1)]


def eisenstein_qexp(spec: EisensteinSpec, B: int, *, formal: bool = False) -> QExpansion:
    """E_k^{psi,phi}: constant -delta(psi) B_{k,phi}/2k, then sigma_{k-1}^{psi,phi}(n).

    With formal=True the parity and (2, 1_1, 1_1) restrictions are lifted and the
    same formula is returned as a formal series.
    """
    k, psi, phi = spec.k, spec.psi, spec.phi
    if not formal:
        if not spec.parity_ok():
            raise ParityError(f"psi phi(-1) must equal (-1)^{k} for {spec.descriptor()}")
        if k == 2 and psi.modulus == 1 and phi.modulus == 1:
            raise ValueError("E_2^{1_1,1_1} is not a modular form; use formal=True")
    if psi.modulus == 1:
        const = -bernoulli_generalized(k, phi) * Fraction(1, 2 * k)
    else:
        const = CyclotomicNumber.zero()
    sig = _sigma_table(k - 1, psi, phi, B)
    meta = FormMeta(k, spec.level, spec.nebentypus)
    return QExpansion([const] + sig[1:], meta)


def eisenstein_lift(k: int, chi: DirichletCharacter, B: int) -> QExpansion:
    """E_k^{1_1,chi} for imprimitive chi, from the primitive series by the Moebius sum.

    h(z) = sum_{d | N1} mu(d) chi0(d) d^(k-1) g(dz) with g = E_k^{1_1,chi0} and N1
    the product of the primes of N not dividing the conductor.  For k = 2 and
    chi = 1_N the primitive series E_2^{1_1,1_1} is used formally.
    """
    chi0 = chi.primitive
    if chi.parity != (-1) ** k:
        raise ParityError(f"chi(-1) must equal (-1)^{k}")
    g = eisenstein_qexp(EisensteinSpec(k, trivial(1), chi0), B, formal=(k == 2 and chi0.modulus == 1))
    extra = [p for p in chi.support if chi0.modulus % p]
    N1 = 1
    for p in extra:
        N1 *= p
    total = None
    for d in range(1, N1 + 1):
        if N1 % d:
            continue
        mu = int(mobius(d))
        coef = chi0(d) * (mu * d ** (k - 1))
        term = g.dilate(d).scale(coef)
        total = term if total is None else total + term
    return QExpansion(total.coeffs, FormMeta(k, chi.canonical_modulus, chi))


# products


def _int_columns(f: QExpansion, M: int, B: int):
    """Common denominator and one integer column per power-basis index at order M."""
    n = euler_phi(M)
    vals = [c.lift(M).coeffs for c in f.coeffs[: B + 1]]
    den = 1
    for v in vals:
        for x in v:
            den = lcm(den, x.denominator)
    cols = []
    for i in range(n):
        col = np.empty(B + 1, dtype=object)
        for j, v in enumerate(vals):
            x = v[i]
            col[j] = x.numerator * (den // x.denominator)
        cols.append(col)
    return den, cols


def qexp_mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product truncated to the shorter expansion."""
    B = min(f.truncation, g.truncation)
    M = 1
    for c in f.coeffs[: B + 1]:
        M = lcm(M, c.order)
    for c in g.coeffs[: B + 1]:
        M = lcm(M, c.order)
    n = euler_phi(M)
    df, fc = _int_columns(f, M, B)
    dg, gc = _int_columns(g, M, B)
    raw = [None] * (2 * n - 1)
    for i in range(n):
        if not any(fc[i]):
            continue
        for j in range(n):
            if not any(gc[j]):
                continue
            prod_ij = np.convolve(fc[i], gc[j])[: B + 1]
            raw[i + j] = prod_ij if raw[i + j] is None else raw[i + j] + prod_ij
    zero_col = np.zeros(B + 1, dtype=object)
    out = [zero_col.copy() for _ in range(n)]
    table = power_table(M)
    for e, col in enumerate(raw):
        if col is None:
            continue
        row = table[e % M]
        for t in range(n):
            if row[t]:
                out[t] = out[t] + row[t] * col
    den = df * dg
    coeffs = [CyclotomicNumber(M, [Fraction(int(out[t][m]), den) for t in range(n)], reduced=True) for m in range(B + 1)]
    meta = None
    if f.meta is not None and g.meta is not None:
        ch = None
        if f.meta.character is not None and g.meta.character is not None:
            ch = f.meta.character * g.meta.character
        lev = None
        if f.meta.level is not None and g.meta.level is not None:
            lev = lcm(f.meta.level, g.meta.level)
        meta = FormMeta(f.meta.weight + g.meta.weight, lev, ch)
    return QExpansion(coeffs, meta)


# Hecke operators and eigenform tests


def hecke_apply(f: QExpansion, n: int, k: int, chi: DirichletCharacter) -> QExpansion:
    """T_n f: a(m) = sum_{d | (m, n)} chi(d) d^(k-1) a_f(mn/d^2), for m <= B/n."""
    if n < 1:
        raise ValueError("n must be positive")
    Bout = f.truncation // n
    if Bout < 1:
        raise ValueError(f"T_{n} needs an input truncation of at least {n}")
    out = []
    for m in range(Bout + 1):
        g = gcd(m, n)
        acc = CyclotomicNumber.zero()
        for d in range(1, g + 1):
            if g % d:
                continue
            c = chi(d)
            if c.is_zero():
                continue
            acc = acc + c * d ** (k - 1) * f.coeffs[m * n // (d * d)]
        out.append(acc)
    return QExpansion(out, f.meta)


@dataclass
class EigenReport:
    passed: bool
    checked_upto: int
    first_violation: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.passed


def eigenform_check(f: QExpansion, k: int, chi: DirichletCharacter, range_: int) -> EigenReport:
    """Check the prime-power recursion and multiplicativity for indices <= range_."""
    if range_ > f.truncation:
        raise ValueError(f"range {range_} exceeds truncation {f.truncation}")
    a = f.coeffs
    if a[1] != 1:
        raise ValueError("eigenform_check needs a normalized expansion (a(1) = 1)")
    for m in range(2, range_ + 1):
        fac = factorint(m)
        if len(fac) == 1:
            p, r = next(iter(fac.items()))
            if r == 1:
                continue
            want = a[p] * a[m // p] - chi(p) * p ** (k - 1) * a[m // (p * p)]
            if a[m] != want:
                return EigenReport(False, range_, m, f"a({m}) != a({p}) a({m // p}) - chi({p}) {p}^{k - 1} a({m // (p * p)})")
        else:
            want = CyclotomicNumber.one()
            for p, r in fac.items():
                want = want * a[p**r]
            if a[m] != want:
                return EigenReport(False, range_, m, f"a({m}) is not the product over its prime powers")
    return EigenReport(True, range_)


def sturm_bound(k: int, N: int) -> Fraction:
    """M = 1 + k N^2/12 prod_{p | N} (1 - 1/p^2); agreement for all n < M suffices."""
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    M = Fraction(k * N * N, 12)
    for p in factorint(N):
        M *= 1 - Fraction(1, p * p)
    return 1 + M


def working_truncation(k: int, N: int, floor: int = 200) -> int:
    return max(ceil(2 * sturm_bound(k, N)), floor)
