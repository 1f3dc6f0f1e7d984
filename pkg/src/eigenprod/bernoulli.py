"""Bernoulli numbers, generalized Bernoulli numbers and the C(k, f) lower bound.

Also enumerates every pair (k, chi), k >= 2, for which 2k/B_{k,chi} is an
algebraic integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod

from mpmath import iv
from sympy import factorint, primerange

from .characters import DirichletCharacter, char_group, trivial
from .cyclotomic import CyclotomicNumber, ivprec

__all__ = [
    "IntegralPair",
    "bernoulli_classical",
    "bernoulli_polynomial",
    "bernoulli_generalized",
    "bernoulli_oracle",
    "zeta_interval",
    "bound_C",
    "bracket_interval",
    "enumerate_integral_pairs",
    "integral_value",
]


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum((comb(m + 1, i) * B[i] for i in range(m)), Fraction(0))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli_classical(n: int) -> Fraction:
    """B_n from sum_{i<=n} C(n+1, i) B_i = 0, so that B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _bernoulli_list(max(n, 1))[n]


@lru_cache(maxsize=None)
def bernoulli_polynomial(k: int) -> tuple[Fraction, ...]:
    """Coefficients of B_k(x) = sum C(k,i) B_i x^(k-i), low degree first."""
    B = _bernoulli_list(max(k, 1))
    coeffs = [Fraction(0)] * (k + 1)
    for i in range(k + 1):
        coeffs[k - i] += comb(k, i) * B[i]
    return tuple(coeffs)


def _weighted_character_sum(chi: DirichletCharacter, weight) -> CyclotomicNumber:
    """sum over a = 1..N of chi(a) * weight(a) as an element of Q(zeta_order)."""
    N, o = chi.modulus, chi.order
    raw = [Fraction(0)] * o
    table = chi.exponent_table
    for a in range(1, N + 1):
        e = table[a % N]
        if e is not None:
            raw[e] += weight(a)
    return CyclotomicNumber.from_raw(o, raw)


@lru_cache(maxsize=None)
def _primitive_bernoulli(k: int, chi0: DirichletCharacter) -> CyclotomicNumber:
    f = chi0.modulus
    B = _bernoulli_list(max(k, 1))
    coeff = [comb(k, i) * B[i] * f**i for i in range(k + 1)]

    def weight(a: int) -> Fraction:
        return sum((coeff[i] * a ** (k - i) for i in range(k + 1)), Fraction(0))

    return _weighted_character_sum(chi0, weight) * Fraction(1, f)


@lru_cache(maxsize=None)
def bernoulli_generalized(k: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{k,chi} from the primitive part and the Euler factors at the primes of N."""
    if k < 1:
        raise ValueError("k must be positive")
    chi0 = chi.primitive
    value = _primitive_bernoulli(k, chi0)
    for p in chi.support:
        value = value * (1 - chi0(p) * p ** (k - 1))
    return value


def bernoulli_oracle(k: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{k,chi} = N^(k-1) sum_a chi(a) B_k(a/N), straight from the modulus of chi."""
    N = chi.modulus
    poly = bernoulli_polynomial(k)

    def weight(a: int) -> Fraction:
        x = Fraction(a, N)
        return sum((c * x**i for i, c in enumerate(poly)), Fraction(0))

    return _weighted_character_sum(chi, weight) * Fraction(N) ** (k - 1)


# certified analytic bounds


def _iv_frac(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def zeta_interval(s: int, prec: int = 256):
    """Certified interval for zeta(s), integer s >= 2, via Euler-Maclaurin.

    The remainder after the last Bernoulli correction is bounded by twice the
    first omitted term.
    """
    if s < 2:
        raise ValueError("s must be at least 2")
    with ivprec(prec + 40):
        N = max(16, prec // 4)
        total = iv.mpf(0)
        for n in range(1, N):
            total += iv.mpf(1) / iv.mpf(n) ** s
        Nf = iv.mpf(N)
        total += Nf ** (1 - s) / (s - 1) + Nf ** (-s) / 2
        tiny = iv.mpf(2) ** (-(prec + 20))
        j = 1
        rising = Fraction(s)  # s (s+1) ... (s+2j-2)
        while True:
            term = _iv_frac(bernoulli_classical(2 * j) / factorial(2 * j) * rising) * Nf ** (-s - 2 * j + 1)
            mag = abs(term)
            if mag.b < tiny:
                err = 2 * mag.b
                total += iv.mpf([-err, err])
                break
            total += term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            j += 1
        return total


def bound_C(k: int, f: int, precision_bits: int = 256):
    """C(k, f) = zeta(2k) (k-1)! f^(k-1/2) / (zeta(k) (2 pi)^k) as an interval."""
    if k < 2:
        raise ValueError("k must be at least 2")
    with ivprec(precision_bits + 40):
        num = zeta_interval(2 * k, precision_bits + 20) * factorial(k - 1)
        num = num * iv.mpf(f) ** (k - 1) * iv.sqrt(iv.mpf(f))
        den = zeta_interval(k, precision_bits + 20) * (2 * iv.pi) ** k
        return num / den


def bracket_interval(k: int, f: int, precision_bits: int = 256):
    """Interval bounds (lower, upper) for |B_{k,chi}| with chi primitive mod f of parity (-1)^k."""
    with ivprec(precision_bits + 40):
        core = 2 * iv.mpf(factorial(k)) * (2 * iv.pi) ** (-k) * iv.mpf(f) ** (k - 1) * iv.sqrt(iv.mpf(f))
        zk = zeta_interval(k, precision_bits + 20)
        z2k = zeta_interval(2 * k, precision_bits + 20)
        return core * z2k / zk, core * zk


# integrality search


@dataclass(frozen=True)
class IntegralPair:
    k: int
    character: DirichletCharacter
    value: CyclotomicNumber

    @property
    def table(self) -> int:
        if self.character.modulus == 1:
            return 1
        if self.character.is_trivial():
            return 2
        return 3

    def sort_key(self):
        return (self.k, self.character.modulus, self.character.label)


def integral_value(k: int, chi: DirichletCharacter) -> CyclotomicNumber | None:
    """2k / B_{k,chi} when it is a nonzero algebraic integer, else None."""
    B = bernoulli_generalized(k, chi)
    if B.is_zero():
        return None
    v = CyclotomicNumber.rational(2 * k) / B
    return v if v.is_algebraic_integer() else None


def _first_k_with_C_above_one(f: int, start: int, prec: int = 128) -> int:
    k = start
    while not bound_C(k, f, prec).a > 1:
        k += 1
    return k


def _trivial_weights(prec: int = 128) -> list[int]:
    """Even k >= 2 with 2k/B_k integral; C(k, 1) grows with k once k >= 7."""
    kmax = _first_k_with_C_above_one(1, 7, prec)
    return [k for k in range(2, kmax, 2) if integral_value(k, trivial(1)) is not None]


def _squarefree_products(primes: list[int]):
    for r in range(1, len(primes) + 1):
        for combo in combinations(primes, r):
            yield combo


def _trivial_level_pairs(weights: list[int]) -> list[IntegralPair]:
    out = []
    for k in weights:
        nu = integral_value(k, trivial(1)).to_fraction()
        # each prime factor contributes |1 - p^(k-1)| which must divide nu
        cands = [p for p in primerange(2, abs(nu) + 3) if abs(nu) % (p ** (k - 1) - 1) == 0]
        for combo in _squarefree_products(cands):
            chi = trivial(prod(combo))
            v = integral_value(k, chi)
            if v is not None:
                out.append(IntegralPair(k, chi, v))
    return out


def _conductor_cap(k: int, prec: int = 128) -> int:
    f = 3
    while not bound_C(k, f, prec).a > 1:
        f += 1
    return f


def _primitive_nontrivial_pairs(prec: int = 128) -> list[IntegralPair]:
    kmax = 2
    while not bound_C(kmax + 1, 3, prec).a > 1:
        kmax += 1
    out = []
    for k in range(2, kmax + 1):
        fcap = _conductor_cap(k, prec)
        for f in range(3, fcap):
            for chi in char_group(f):
                if chi.is_trivial() or not chi.is_primitive() or chi.parity != (-1) ** k:
                    continue
                v = integral_value(k, chi)
                if v is not None:
                    out.append(IntegralPair(k, chi, v))
    return out


def _imprimitive_extensions(base: list[IntegralPair]) -> list[IntegralPair]:
    """Imprimitive chi = chi0 * 1_M for chi0 in `base`.

    An extra prime p divides the modulus only if the norm of 1 - chi0(p) p^(k-1)
    divides the norm of the value, which bounds p.
    """
    out = []
    for pair in base:
        chi0, k = pair.character, pair.k
        nrm = abs(pair.value.norm())
        deg = len(pair.value.galois_units())
        bound = 2
        while (bound ** (k - 1) - 1) ** deg <= nrm:
            bound += 1
        f_primes = set(factorint(chi0.modulus))
        cands = [
            p
            for p in primerange(2, bound + 1)
            if p not in f_primes and (1 - chi0(p) * p ** (k - 1)).norm() != 0
            and nrm % abs((1 - chi0(p) * p ** (k - 1)).norm()) == 0
        ]
        for combo in _squarefree_products(cands):
            chi = chi0 * trivial(prod(combo))
            v = integral_value(k, chi)
            if v is not None:
                out.append(IntegralPair(k, chi, v))
    return out


@lru_cache(maxsize=None)
def enumerate_integral_pairs() -> tuple[IntegralPair, ...]:
    """All (k, chi), k >= 2, with 2k/B_{k,chi} an algebraic integer."""
    weights = _trivial_weights()
    pairs = [IntegralPair(k, trivial(1), integral_value(k, trivial(1))) for k in weights]
    pairs += _trivial_level_pairs(weights)
    prim = _primitive_nontrivial_pairs()
    pairs += prim
    pairs += _imprimitive_extensions(prim)
    return tuple(sorted(pairs, key=IntegralPair.sort_key))
