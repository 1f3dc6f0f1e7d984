"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) modulo the
m-th cyclotomic polynomial, with rational coefficients.
"""
from __future__ import annotations

import re
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from mpmath import iv, mp
from sympy import cyclotomic_poly, divisors, totient
from sympy.abc import x as _x

__all__ = [
    "CyclotomicNumber",
    "cyc",
    "cyc_root_of_unity",
    "cyc_arith",
    "cyc_embeddings",
    "cyc_is_algebraic_integer",
    "cyclotomic_coeffs",
    "common_order",
]


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, low degree first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(m, _x, polys=True).all_coeffs()))


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return int(totient(m))


@lru_cache(maxsize=None)
def power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Reduced integer coordinates of z^e for 0 <= e < m."""
    n = euler_phi(m)
    phi_m = cyclotomic_coeffs(m)
    rows = []
    cur = [0] * n
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by z and reduce z^n = -sum phi_m[i] z^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(n):
                cur[i] -= top * phi_m[i]
    return tuple(rows)


def reduce_raw(m: int, raw: Sequence) -> list:
    """Reduce a coefficient list in powers of z (any length) modulo Phi_m."""
    n = euler_phi(m)
    folded = [0] * m
    for e, c in enumerate(raw):
        if c:
            folded[e % m] += c
    out = list(folded[:n])
    if m > n:
        table = power_table(m)
        for e in range(n, m):
            c = folded[e]
            if c:
                row = table[e]
                for i in range(n):
                    if row[i]:
                        out[i] += c * row[i]
    return out


@contextmanager
def ivprec(prec: int):
    """Temporarily set the working precision of the interval context."""
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


class CyclotomicNumber:
    """Element of Q(zeta_m) held as phi(m) rational power-basis coordinates."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Iterable = (0,), *, reduced: bool = False):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        if reduced:
            self.coeffs = tuple(coeffs)
        else:
            vals = [_as_fraction(c) for c in coeffs]
            n = euler_phi(order)
            if len(vals) > n:
                vals = reduce_raw(order, vals)
            vals = vals + [Fraction(0)] * (n - len(vals))
            self.coeffs = tuple(Fraction(v) for v in vals)
        self._hash = None

    # constructors

    @classmethod
    def rational(cls, value, order: int = 1) -> "CyclotomicNumber":
        n = euler_phi(order)
        return cls(order, (Fraction(value),) + (Fraction(0),) * (n - 1), reduced=True)

    @classmethod
    def zero(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.rational(1, order)

    @classmethod
    def root_of_unity(cls, m: int, e: int = 1) -> "CyclotomicNumber":
        row = power_table(m)[e % m]
        return cls(m, (Fraction(c) for c in row), reduced=True)

    @classmethod
    def from_raw(cls, m: int, raw: Sequence) -> "CyclotomicNumber":
        """Build from coefficients of z^0, z^1, ... of arbitrary length."""
        return cls(m, (Fraction(c) for c in reduce_raw(m, raw)), reduced=True)

    # embeddings between orders

    def lift(self, order: int) -> "CyclotomicNumber":
        """The same number written in Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"order {self.order} does not divide {order}")
        step = order // self.order
        raw = [0] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            raw[i * step] = c
        return CyclotomicNumber(order, reduce_raw(order, raw), reduced=True)

    def _coerce(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.rational(other)
        if other.order == self.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    # field operations

    def __add__(self, other):
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        return CyclotomicNumber(a.order, [p + q for p, q in zip(a.coeffs, b.coeffs)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, [-c for c in self.coeffs], reduced=True)

    def __sub__(self, other):
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        return CyclotomicNumber(a.order, [p - q for p, q in zip(a.coeffs, b.coeffs)], reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.order, [c * other for c in self.coeffs], reduced=True)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerce(other)
        if a.order <= 2:
            return CyclotomicNumber(a.order, (a.coeffs[0] * b.coeffs[0],), reduced=True)
        ac, bc = a.coeffs, b.coeffs
        raw = [0] * (len(ac) + len(bc) - 1)
        for i, p in enumerate(ac):
            if p:
                for j, q in enumerate(bc):
                    if q:
                        raw[i + j] += p * q
        return CyclotomicNumber(a.order, reduce_raw(a.order, raw), reduced=True)

    __rmul__ = __mul__

    def conjugate_by(self, t: int) -> "CyclotomicNumber":
        """Image under the automorphism zeta_m -> zeta_m^t, gcd(t, m) = 1."""
        m = self.order
        if gcd(t, m) != 1:
            raise ValueError("t must be coprime to the order")
        raw = [0] * m
        for i, c in enumerate(self.coeffs):
            if c:
                raw[(i * t) % m] += c
        return CyclotomicNumber(m, reduce_raw(m, raw), reduced=True)

    def complex_conjugate(self) -> "CyclotomicNumber":
        return self.conjugate_by(-1 % self.order if self.order > 1 else 1)

    def galois_units(self) -> list[int]:
        m = self.order
        return [t for t in range(1, max(m, 2)) if gcd(t, m) == 1] if m > 1 else [1]

    def norm(self) -> Fraction:
        """Absolute norm N_{Q(zeta_m)/Q}."""
        prod = CyclotomicNumber.one(self.order)
        for t in self.galois_units():
            prod = prod * self.conjugate_by(t)
        return prod.coeffs[0]

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.order <= 2:
            return CyclotomicNumber.rational(1 / self.coeffs[0], self.order)
        rest = CyclotomicNumber.one(self.order)
        for t in self.galois_units():
            if t != 1:
                rest = rest * self.conjugate_by(t)
        nrm = (self * rest).coeffs[0]
        return rest * (1 / nrm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in a cyclotomic field")
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.rational(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # predicates and comparisons

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_algebraic_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            c = self.canonical()
            if c.order == 1:
                self._hash = hash(c.coeffs[0])
            else:
                self._hash = hash((c.order, c.coeffs))
        return self._hash

    # canonical order

    def canonical(self) -> "CyclotomicNumber":
        """Same number written at the smallest order whose field contains it."""
        if self.is_rational():
            return CyclotomicNumber.rational(self.coeffs[0])
        m = self.order
        for d in divisors(m):
            if d == m:
                break
            if d % 2 == 1 and 2 * d == m:
                return self._descend(d)
            fixed = True
            for t in range(1 + d, m, d):
                if gcd(t, m) == 1 and self.conjugate_by(t) != self:
                    fixed = False
                    break
            if fixed:
                return self._descend(d)
        return self

    def _descend(self, d: int) -> "CyclotomicNumber":
        """Rewrite at order d, assuming the number lies in Q(zeta_d)."""
        m = self.order
        n_d = euler_phi(d)
        basis = [CyclotomicNumber.root_of_unity(d, j).lift(m).coeffs for j in range(n_d)]
        sol = _solve_rational([list(col) for col in zip(*basis)], list(self.coeffs), n_d)
        return CyclotomicNumber(d, sol, reduced=True).canonical() if d > 1 else CyclotomicNumber(d, sol, reduced=True)

    # numerics

    def to_complex(self, dps: int = 30) -> complex:
        with mp.workdps(dps):
            z = mp.mpc(0)
            for i, c in enumerate(self.coeffs):
                if c:
                    z += mp.mpf(c.numerator) / c.denominator * mp.expjpi(mp.mpf(2 * i) / self.order)
            return complex(z)

    def to_mpc(self):
        z = mp.mpc(0)
        for i, c in enumerate(self.coeffs):
            if c:
                z += mp.mpf(c.numerator) / c.denominator * mp.expjpi(mp.mpf(2 * i) / self.order)
        return z

    def interval_parts(self, prec: int):
        """Certified real and imaginary parts as mpmath intervals."""
        with ivprec(prec):
            re_part = iv.mpf(0)
            im_part = iv.mpf(0)
            for i, c in enumerate(self.coeffs):
                if c:
                    q = iv.mpf(c.numerator) / c.denominator
                    ang = 2 * iv.pi * i / self.order
                    re_part += q * iv.cos(ang)
                    im_part += q * iv.sin(ang)
            return re_part, im_part

    def abs_interval(self, precision_bits: int = 256):
        """Certified interval for |x| with relative width below 2^(1-precision_bits)."""
        prec = precision_bits + 32
        while True:
            with ivprec(prec):
                re_part, im_part = self.interval_parts(prec)
                sq = re_part * re_part + im_part * im_part
                val = iv.sqrt(iv.mpf([max(sq.a.a, 0), sq.b.b]))
                if self.is_zero():
                    return val
                if val.a > 0 and (val.b - val.a) <= val.a * iv.mpf(2) ** (1 - precision_bits):
                    return val
            prec *= 2
            if prec > 1 << 16:
                return val

    # formatting

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.pretty()

    def pretty(self) -> str:
        """Human readable form; uses i for Q(i) and zeta6 for Q(zeta_3)."""
        c = self.canonical()
        if c.order == 1:
            return str(c.coeffs[0])
        if c.order == 4:
            return _poly_str(c.coeffs, "i")
        if c.order in (3, 6):
            z6 = c.lift(6) if c.order == 3 else c
            return _poly_str(z6.coeffs, "zeta6")
        return _poly_str(c.coeffs, f"zeta{c.order}")

    def to_record(self) -> dict:
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        nums = [int(c * den) for c in self.coeffs]
        return {"order": self.order, "numerators": nums, "denominator": den}

    @classmethod
    def from_record(cls, rec: dict) -> "CyclotomicNumber":
        den = rec["denominator"]
        return cls(rec["order"], [Fraction(n, den) for n in rec["numerators"]])

    def to_text(self) -> str:
        rec = self.to_record()
        d = rec["denominator"]
        body = ", ".join(f"{n}/{d}" for n in rec["numerators"])
        return f"cyc({self.order}; {body})"

    @classmethod
    def from_text(cls, text: str) -> "CyclotomicNumber":
        m = re.fullmatch(r"\s*cyc\(\s*(\d+)\s*;(.*)\)\s*", text)
        if not m:
            raise ValueError(f"not a cyclotomic literal: {text!r}")
        order = int(m.group(1))
        parts = [p.strip() for p in m.group(2).split(",") if p.strip()]
        return cls(order, [Fraction(p) for p in parts])


def _poly_str(coeffs, sym: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = sym if i == 1 else f"{sym}^{i}"
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _solve_rational(rows: list[list], rhs: list, ncols: int) -> list[Fraction]:
    """Least-squares-free exact solve of a consistent overdetermined system."""
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    r = 0
    pivots = []
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][-1]
    return sol


def cyc(value, order: int = 1) -> CyclotomicNumber:
    """Coerce an int, Fraction or CyclotomicNumber."""
    if isinstance(value, CyclotomicNumber):
        return value
    return CyclotomicNumber.rational(value, order)


def common_order(values: Iterable[CyclotomicNumber]) -> int:
    return reduce(lcm, (v.order for v in values), 1)


def cyc_root_of_unity(m: int, e: int) -> CyclotomicNumber:
    if m < 1:
        raise ValueError("m must be positive")
    return CyclotomicNumber.root_of_unity(m, e)


def cyc_arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


def cyc_embeddings(a: CyclotomicNumber, precision_bits: int = 256):
    """All Galois conjugates of a together with certified intervals for |conjugate|."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    return [(a.conjugate_by(t), a.conjugate_by(t).abs_interval(precision_bits)) for t in a.galois_units()]


def cyc_is_algebraic_integer(a: CyclotomicNumber) -> bool:
    return a.is_algebraic_integer()
