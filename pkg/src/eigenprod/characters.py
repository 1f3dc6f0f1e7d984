"""Dirichlet characters with the naming scheme used by the identity tables.

A character mod N is stored through its values on a fixed set of generators of
(Z/NZ)*: for each prime power q || N with q odd we use the smallest generator
b of (Z/qZ)*, and for 2^e we use -1 (e >= 2) and 5 (e >= 3), each lifted to
(Z/NZ)* by the Chinese remainder theorem.  chi_{q,1} sends b to exp(2 pi i/phi(q)).
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm

from sympy import factorint, is_primitive_root, totient

from .cyclotomic import CyclotomicNumber

__all__ = [
    "DirichletCharacter",
    "char_group",
    "char_eval",
    "char_conductor_primitive",
    "char_lift_equiv",
    "char_label",
    "parse_character",
    "trivial",
    "identify_character",
    "canonical_characters",
]


@lru_cache(maxsize=None)
def smallest_generator(q: int) -> int:
    """Smallest b > 1 generating the cyclic group (Z/qZ)*."""
    if q <= 2:
        return 1
    for b in range(2, q):
        if gcd(b, q) == 1 and is_primitive_root(b, q):
            return b
    raise ValueError(f"(Z/{q}Z)* is not cyclic")


def _crt_lift(g: int, q: int, N: int) -> int:
    """The residue mod N congruent to g mod q and to 1 mod N/q."""
    r = N // q
    if r == 1:
        return g % N
    # x = g + q*t with x = 1 mod r
    t = ((1 - g) * pow(q, -1, r)) % r
    return (g + q * t) % N


@lru_cache(maxsize=None)
def group_structure(N: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """Per prime power q || N (ascending): tuple of (q, generator mod N, order)."""
    comps = []
    for p, e in sorted(factorint(N).items()):
        q = p**e
        gens = []
        if p == 2:
            if e >= 2:
                gens.append((q, _crt_lift(q - 1, q, N), 2))
            if e >= 3:
                gens.append((q, _crt_lift(5, q, N), 2 ** (e - 2)))
        else:
            gens.append((q, _crt_lift(smallest_generator(q), q, N), int(totient(q))))
        comps.append(tuple(gens))
    return tuple(comps)


@lru_cache(maxsize=None)
def flat_generators(N: int) -> tuple[tuple[int, int], ...]:
    return tuple((g, o) for comp in group_structure(N) for (_, g, o) in comp)


@lru_cache(maxsize=None)
def discrete_logs(N: int) -> dict[int, tuple[int, ...]]:
    """Map each unit mod N to its exponent vector on flat_generators(N)."""
    gens = flat_generators(N)
    logs: dict[int, tuple[int, ...]] = {}
    for exps in product(*(range(o) for _, o in gens)):
        a = 1
        for (g, _), k in zip(gens, exps):
            a = a * pow(g, k, N) % N
        logs[a % N if N > 1 else 0] = exps
    return logs


class DirichletCharacter:
    """A Dirichlet character mod N given by its angles on the standard generators."""

    def __init__(self, modulus: int, angles, label: str | None = None):
        gens = flat_generators(modulus)
        angles = tuple(Fraction(a) % 1 for a in angles)
        if len(angles) != len(gens):
            raise ValueError("one angle per generator is required")
        for a, (_, o) in zip(angles, gens):
            if (a * o).denominator != 1:
                raise ValueError("generator image order must divide the generator order")
        self.modulus = modulus
        self.angles = angles
        self._label = label

    # construction helpers

    @classmethod
    def from_exponents(cls, modulus: int, exps) -> "DirichletCharacter":
        gens = flat_generators(modulus)
        return cls(modulus, [Fraction(e, o) for e, (_, o) in zip(exps, gens)])

    @classmethod
    def from_angle_function(cls, modulus: int, angle_of) -> "DirichletCharacter":
        """Character whose value at each generator g is exp(2 pi i angle_of(g))."""
        return cls(modulus, [angle_of(g) for g, _ in flat_generators(modulus)])

    # values

    def angle(self, n: int) -> Fraction | None:
        """chi(n) = exp(2 pi i angle), or None when gcd(n, N) > 1."""
        N = self.modulus
        if N == 1:
            return Fraction(0)
        r = n % N
        if gcd(r, N) != 1:
            return None
        exps = discrete_logs(N)[r]
        return sum((a * k for a, k in zip(self.angles, exps)), Fraction(0)) % 1

    @cached_property
    def order(self) -> int:
        o = 1
        for a in self.angles:
            o = lcm(o, a.denominator)
        return o

    @cached_property
    def exponent_table(self) -> tuple:
        """chi(n) as an exponent of zeta_order for n = 0..N-1, None off the units."""
        N, o = self.modulus, self.order
        if N == 1:
            return (0,)
        out = []
        for r in range(N):
            a = self.angle(r)
            out.append(None if a is None else int(a * o))
        return tuple(out)

    def exp_at(self, n: int):
        return self.exponent_table[n % self.modulus]

    def __call__(self, n: int) -> CyclotomicNumber:
        e = self.exp_at(n)
        if e is None:
            return CyclotomicNumber.zero(self.order)
        return CyclotomicNumber.root_of_unity(self.order, e)

    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def parity(self) -> int:
        """chi(-1), either 1 or -1."""
        if self.modulus <= 2:
            return 1
        a = self.angle(-1)
        return 1 if a == 0 else -1

    def is_even(self) -> bool:
        return self.parity == 1

    # structure

    def lift(self, M: int) -> "DirichletCharacter":
        """The induced character mod M (a multiple of the modulus)."""
        if M % self.modulus:
            raise ValueError(f"cannot lift a character mod {self.modulus} to modulus {M}")
        if M == self.modulus:
            return self
        return DirichletCharacter.from_angle_function(M, lambda g: self.angle(g))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = lcm(self.modulus, other.modulus)
        a, b = self.lift(M), other.lift(M)
        return DirichletCharacter(M, [x + y for x, y in zip(a.angles, b.angles)])

    def __pow__(self, e: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [a * e for a in self.angles])

    def conjugate(self) -> "DirichletCharacter":
        return self ** -1

    def galois_conjugate(self, t: int) -> "DirichletCharacter":
        """chi^sigma_t, where sigma_t raises roots of unity of order `order` to the t-th power."""
        return self ** t

    @cached_property
    def conductor(self) -> int:
        N = self.modulus
        if self.is_trivial():
            return 1
        table = self.exponent_table
        for d in sorted(_divisors(N)):
            if all(table[a] == 0 for a in range(1, N) if table[a] is not None and a % d == 1 % d):
                return d
        return N

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @cached_property
    def primitive(self) -> "DirichletCharacter":
        f = self.conductor
        if f == self.modulus:
            return self
        N = self.modulus

        def angle_of(h: int) -> Fraction:
            x = h
            while gcd(x, N) != 1:
                x += f
            return self.angle(x)

        return DirichletCharacter.from_angle_function(f, angle_of)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(factorint(self.modulus)))

    @cached_property
    def function_key(self) -> tuple:
        """Key identifying the character as a function on Z."""
        p = self.primitive
        return (p.modulus, p.angles, self.support)

    def is_equivalent(self, other: "DirichletCharacter") -> bool:
        return self.function_key == other.function_key

    @cached_property
    def canonical_modulus(self) -> int:
        """Conductor times the primes of N that do not divide it."""
        f = self.conductor
        m = f
        for p in self.support:
            if f % p:
                m *= p
        return m

    @cached_property
    def canonical(self) -> "DirichletCharacter":
        """The same function on Z at its smallest modulus."""
        M = self.canonical_modulus
        if M == self.modulus:
            return self
        return self.primitive.lift(M)

    def local_components(self) -> list["DirichletCharacter"]:
        """The characters mod each prime power q || N whose product is this one."""
        out = []
        idx = 0
        N = self.modulus
        for comp in group_structure(N):
            q = comp[0][0]
            k = len(comp)
            local_angles = self.angles[idx : idx + k]
            idx += k
            out.append(DirichletCharacter(q, local_angles))
        if not out:
            out.append(DirichletCharacter(1, ()))
        return out

    # identity and display

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.angles == other.angles

    def __hash__(self):
        return hash((self.modulus, self.angles))

    @property
    def label(self) -> str:
        if self._label is None:
            self._label = _label(self)
        return self._label

    def __repr__(self):
        return f"DirichletCharacter({self.label})"

    def __str__(self):
        return self.label


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def trivial(N: int = 1) -> DirichletCharacter:
    return DirichletCharacter(N, [0] * len(flat_generators(N)))


# naming


def _local_label(chi: DirichletCharacter) -> str | None:
    """Name of a character whose modulus is a prime power, if it has one."""
    q = chi.modulus
    if chi.is_trivial():
        return f"1_{q}"
    p = min(factorint(q))
    if p != 2:
        j = int(chi.angles[0] * int(totient(q)))
        if q == 3:
            return "chi3"
        return f"chi_{{{q},{j}}}"
    if q == 4:
        return "chi4"
    if q == 8:
        named = {(Fraction(1, 2), Fraction(1, 2)): "chi8_1", (Fraction(0), Fraction(1, 2)): "chi8_2"}
        return named.get(chi.angles)
    return None


def _fallback(chi: DirichletCharacter) -> str:
    body = ",".join(f"{g}:{a}" for (g, _), a in zip(flat_generators(chi.modulus), chi.angles))
    return f"char({chi.modulus};{body})"


def _primitive_label(chi: DirichletCharacter) -> str | None:
    if chi.modulus == 12 and chi.is_primitive():
        return "chi12"
    if len(chi.support) <= 1:
        return _local_label(chi)
    names = []
    for comp in chi.local_components():
        if comp.is_trivial():
            continue
        nm = _local_label(comp)
        if nm is None:
            return None
        names.append(nm)
    return "*".join(names)


def _label(chi: DirichletCharacter) -> str:
    N = chi.modulus
    if chi.is_trivial():
        return f"1_{N}"
    if len(chi.support) == 1:
        nm = _local_label(chi)
        if nm is not None:
            return nm
    if chi.is_primitive():
        nm = _primitive_label(chi)
        return nm if nm is not None else _fallback(chi)
    nm = _primitive_label(chi.primitive)
    if nm is None:
        return _fallback(chi)
    return f"{nm}*1_{N}"


_ATOM = re.compile(r"1_(\d+)|chi3|chi4|chi12|chi8_1|chi8_2|chi_\{(\d+),(\d+)\}")


_FALLBACK = re.compile(r"char\((\d+);(.*)\)")


def _parse_atom(text: str) -> DirichletCharacter:
    fb = _FALLBACK.fullmatch(text.strip())
    if fb:
        N = int(fb.group(1))
        angles = [Fraction(item.split(":")[1]) for item in fb.group(2).split(",") if item]
        return DirichletCharacter(N, angles)
    m = _ATOM.fullmatch(text.strip())
    if not m:
        raise ValueError(f"unknown character descriptor {text!r}")
    s = m.group(0)
    if m.group(1):
        return trivial(int(m.group(1)))
    if s == "chi3":
        return DirichletCharacter(3, [Fraction(1, 2)])
    if s == "chi4":
        return DirichletCharacter(4, [Fraction(1, 2)])
    if s == "chi12":
        return _parse_atom("chi3") * _parse_atom("chi4")
    if s == "chi8_1":
        return DirichletCharacter(8, [Fraction(1, 2), Fraction(1, 2)])
    if s == "chi8_2":
        return DirichletCharacter(8, [Fraction(0), Fraction(1, 2)])
    q, j = int(m.group(2)), int(m.group(3))
    if q == 8 and j in (1, 2):
        return _parse_atom(f"chi8_{j}")
    fac = factorint(q)
    if len(fac) != 1 or (2 in fac and q > 4):
        raise ValueError(f"chi_{{q,j}} needs q an odd prime power, 2 or 4; got {q}")
    n = int(totient(q))
    return DirichletCharacter(q, [Fraction(j, n)])


@lru_cache(maxsize=None)
def parse_character(desc: str) -> DirichletCharacter:
    """Parse a descriptor such as '1_15', 'chi_{5,2}' or 'chi3*chi4'."""
    parts = desc.split("*")
    chi = _parse_atom(parts[0])
    for part in parts[1:]:
        chi = chi * _parse_atom(part)
    return chi


# operation-level API


@lru_cache(maxsize=None)
def char_group(N: int) -> tuple[DirichletCharacter, ...]:
    gens = flat_generators(N)
    return tuple(
        DirichletCharacter.from_exponents(N, exps) for exps in product(*(range(o) for _, o in gens))
    )


def char_eval(chi: DirichletCharacter, n: int) -> CyclotomicNumber:
    return chi(n)


def char_conductor_primitive(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    return chi.conductor, chi.primitive


def char_lift_equiv(chi: DirichletCharacter, M: int, other: DirichletCharacter | None = None):
    """Lift chi to modulus M, or when `other` is given decide equality as functions on Z."""
    if other is not None:
        return chi.is_equivalent(other)
    return chi.lift(M)


def char_label(chi: DirichletCharacter) -> str:
    return chi.label


def _radical_moduli(primes: list[int], cap: int) -> list[int]:
    out = [1]
    for p in primes:
        nxt = []
        for m in out:
            q = p
            while m * q <= cap:
                nxt.append(m * q)
                q *= p
        out = nxt
    return sorted(out)


def identify_character(values: dict[int, CyclotomicNumber], parity: int, cap: int = 256) -> list[DirichletCharacter]:
    """Characters (as functions on Z, canonical moduli) matching the given prime values."""
    zeros = sorted(p for p, v in values.items() if v.is_zero())
    found: dict[tuple, DirichletCharacter] = {}
    for M in _radical_moduli(zeros, cap):
        for chi in char_group(M):
            if chi.parity != parity:
                continue
            if all(chi(p) == v for p, v in values.items()):
                can = chi.canonical
                found.setdefault(can.function_key, can)
    return sorted(found.values(), key=lambda ch: (ch.canonical_modulus, ch.label))


@lru_cache(maxsize=None)
def canonical_characters(cap: int) -> tuple[DirichletCharacter, ...]:
    """Every character, as a function on Z, whose canonical modulus is at most cap."""
    out = []
    for M in range(1, cap + 1):
        out.extend(chi for chi in char_group(M) if chi.canonical_modulus == M)
    return tuple(out)
