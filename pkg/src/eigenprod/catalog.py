"""Embedded catalog of the 61 eigenform product identities, form resolution and verification."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, lcm

from sympy import factorint

from .case1 import f_series, parse_pair, reconstruct_g
from .characters import DirichletCharacter, parse_character, trivial
from .cyclotomic import CyclotomicNumber
from .qseries import EisensteinSpec, QExpansion, eigenform_check, eisenstein_qexp, sturm_bound
from .records import IdentityRecord, source_table

__all__ = [
    "PhiExpansion",
    "VerificationReport",
    "catalog",
    "phi_expansions",
    "parse_form",
    "resolve_form",
    "form_character",
    "verify_identity",
    "verify_all",
    "catalog_statistics",
    "table8",
]

VERIFY_FLOOR = 200


def _q(text) -> CyclotomicNumber:
    return CyclotomicNumber.rational(Fraction(text))


def _i(a: int, b: int) -> CyclotomicNumber:
    """a + b i"""
    return CyclotomicNumber(4, [a, b])


def _z6(a: int, b: int) -> CyclotomicNumber:
    """a + b zeta6"""
    return CyclotomicNumber(6, [a, b])


E4, E6, E8, E10, E14 = (f"E{k}^{{1_1,1_1}}" for k in (4, 6, 8, 10, 14))

# (level, h, scalar, f, g) with h = scalar * f * g and every form a(1)-normalized
_ROWS = [
    (1, E8, _q(120), E4, E4),
    (1, E10, _q("5040/11"), E4, E6),
    (1, E14, _q(2640), E4, E10),
    (1, E14, _q(10080), E6, E8),
    (1, "Delta_{16,1}", _q(240), E4, "Delta_{12,1}"),
    (1, "Delta_{18,1}", _q(-504), E6, "Delta_{12,1}"),
    (1, "Delta_{20,1}", _q(240), E4, "Delta_{16,1}"),
    (1, "Delta_{20,1}", _q(480), E8, "Delta_{12,1}"),
    (1, "Delta_{22,1}", _q(240), E4, "Delta_{18,1}"),
    (1, "Delta_{22,1}", _q(-504), E6, "Delta_{16,1}"),
    (1, "Delta_{22,1}", _q(-264), E10, "Delta_{12,1}"),
    (1, "Delta_{26,1}", _q(240), E4, "Delta_{22,1}"),
    (1, "Delta_{26,1}", _q(-504), E6, "Delta_{20,1}"),
    (1, "Delta_{26,1}", _q(480), E8, "Delta_{18,1}"),
    (1, "Delta_{26,1}", _q(-264), E10, "Delta_{16,1}"),
    (1, "Delta_{26,1}", _q(-24), E14, "Delta_{12,1}"),
    (2, "E6^{1_2,1_1}", _q(24), "E2^{1_1,1_2}", "E4^{1_2,1_1}"),
    (2, "Delta_{10,2}", _q(24), "E2^{1_1,1_2}", "Delta_{8,2}"),
    (3, "E5^{1_1,chi3}", _q(-36), "E2^{1_1,1_3}", "E3^{1_1,chi3}"),
    (3, "E5^{chi3,1_1}", _q(12), "E2^{1_1,1_3}", "E3^{chi3,1_1}"),
    (3, "Delta_{6,3}", _q(-9), "E3^{1_1,chi3}", "E3^{chi3,1_1}"),
    (3, "Delta_{7,3,chi3}", _q(-9), "E3^{1_1,chi3}", "E4^{1_3,1_1}"),
    (3, "Delta_{8,3}", _q(-9), "E3^{1_1,chi3}", "E5^{chi3,1_1}"),
    (3, "Delta_{8,3}", _q(3), "E5^{1_1,chi3}", "E3^{chi3,1_1}"),
    (3, "Delta_{8,3}", _q(12), "E2^{1_1,1_3}", "Delta_{6,3}"),
    (3, "Phi_{10,3}", _q(3), "E5^{1_1,chi3}", "E5^{chi3,1_1}"),
    (3, "Phi_{10,3}", _q(12), "E2^{1_1,1_3}", "Delta_{8,3}"),
    (4, "Delta_{5,4,chi4}", _q(-4), "E3^{1_1,chi4}", "E2^{1_2,1_2}"),
    (4, "Delta_{6,4}", _q(-4), "E3^{1_1,chi4}", "E3^{chi4,1_1}"),
    (4, "Delta_{8,2}", _q(-4), "E3^{1_1,chi4}", "Delta_{5,4,chi4}"),
    (5, "Delta_{4,5}", _q(-5), "E2^{1_1,chi_{5,2}}", "E2^{chi_{5,2},1_1}"),
    (5, "E4^{1_1,chi_{5,2}}", _q(-30), "E2^{1_1,1_5}", "E2^{1_1,chi_{5,2}}"),
    (5, "E4^{chi_{5,2},1_1}", _q(6), "E2^{1_1,1_5}", "E2^{chi_{5,2},1_1}"),
    (5, "Delta_{5,5,chi_{5,3}}", _q(-5), "E2^{1_1,chi_{5,2}}", "E3^{chi_{5,1},1_1}"),
    (5, "Delta_{5,5,chi_{5,1}}", _q(-5), "E2^{1_1,chi_{5,2}}", "E3^{chi_{5,3},1_1}"),
    (5, "Delta_{5,5,chi_{5,3}}", _i(-2, 1), "E3^{1_1,chi_{5,1}}", "E2^{chi_{5,2},1_1}"),
    (5, "Delta_{5,5,chi_{5,1}}", _i(-2, -1), "E3^{1_1,chi_{5,3}}", "E2^{chi_{5,2},1_1}"),
    (5, "Delta_{6,5}", _q(6), "E2^{1_1,1_5}", "Delta_{4,5}"),
    (5, "Delta_{6,5}", _q(-5), "E2^{1_1,chi_{5,2}}", "E4^{chi_{5,2},1_1}"),
    (5, "Delta_{6,5}", _i(-2, 1), "E3^{1_1,chi_{5,1}}", "E3^{chi_{5,3},1_1}"),
    (5, "Delta_{6,5}", _i(-2, -1), "E3^{1_1,chi_{5,3}}", "E3^{chi_{5,1},1_1}"),
    (5, "Delta_{6,5}", _q(1), "E4^{1_1,chi_{5,2}}", "E2^{chi_{5,2},1_1}"),
    (5, "Phi_{10,5}", _q(6), "E2^{1_1,1_5}", "Phi_{8,5}"),
    (6, "Delta_{4,6}", _q(-1), "E2^{1_1,chi12}", "E2^{chi3,chi4}"),
    (7, "Delta_{4,7}", _z6(-2, -1), "E2^{1_1,chi_{7,2}}", "E2^{chi_{7,4},1_1}"),
    (7, "Delta_{4,7}", _z6(-3, 1), "E2^{1_1,chi_{7,4}}", "E2^{chi_{7,2},1_1}"),
    (7, "Delta_{4,7,chi_{7,4}}", _z6(-2, -1), "E2^{1_1,chi_{7,2}}", "E2^{chi_{7,2},1_1}"),
    (7, "Delta_{4,7,chi_{7,2}}", _z6(-3, 1), "E2^{1_1,chi_{7,4}}", "E2^{chi_{7,4},1_1}"),
    (7, "Delta_{5,7,chi_{7,3}}", _q(4), "E2^{1_1,1_7}", "Delta_{3,7,chi_{7,3}}"),
    (7, "Delta_{5,7,chi_{7,3}}", _z6(-2, -1), "E2^{1_1,chi_{7,2}}", "E3^{chi_{7,1},1_1}"),
    (7, "Delta_{5,7,chi_{7,3}}", _z6(-3, 1), "E2^{1_1,chi_{7,4}}", "E3^{chi_{7,5},1_1}"),
    (7, "Delta_{5,7,chi_{7,3}}", _z6(-1, 1), "E3^{1_1,chi_{7,1}}", "E2^{chi_{7,2},1_1}"),
    (7, "Delta_{5,7,chi_{7,3}}", _z6(0, -1), "E3^{1_1,chi_{7,5}}", "E2^{chi_{7,4},1_1}"),
    (7, "Phi_{8,7}", _q(4), "E2^{1_1,1_7}", "Phi_{6,7}"),
    (8, "Delta_{4,8}", _q(-2), "E2^{1_1,chi8_2}", "E2^{chi8_2,1_1}"),
    (8, "Delta_{5,4,chi4}", _q(-2), "E2^{1_1,chi8_2}", "Delta_{3,8,chi8_1}"),
    (9, "Delta_{4,9}", _z6(-2, 1), "E2^{1_1,chi_{9,2}}", "E2^{chi_{9,4},1_1}"),
    (9, "Delta_{4,9}", _z6(-1, -1), "E2^{1_1,chi_{9,4}}", "E2^{chi_{9,2},1_1}"),
    (10, "Phi_{6,10}", _q(-6), "E2^{1_1,1_10}", "Phi_{4,10}"),
    (15, "Phi_{6,15}", _q(-3), "E2^{1_1,1_15}", "Phi_{4,15}"),
    (21, "Phi_{4,21}", _q(-2), "E2^{1_1,1_21}", "Delta_{2,21}"),
]

_NOTES = {
    ("Delta_{4,7}", "E2^{1_1,chi_{7,4}}"): "printed scalar zeta6+3; zeta6-3 = -4/B_{2,chi_{7,4}} is the value that verifies",
    ("Delta_{4,7,chi_{7,2}}", "E2^{1_1,chi_{7,4}}"): "printed scalar zeta6+3; zeta6-3 = -4/B_{2,chi_{7,4}} is the value that verifies",
    ("Delta_{5,7,chi_{7,3}}", "E2^{1_1,chi_{7,4}}"): "printed scalar zeta6+3; zeta6-3 = -4/B_{2,chi_{7,4}} is the value that verifies",
    ("Delta_{4,6}", "E2^{1_1,chi12}"): "h is the level 6 form (eta(z)eta(2z)eta(3z)eta(6z))^2; the factor levels alone would give 12",
}

# Cusp forms that occur as a factor g: the pair whose f reconstructs them, with (c2, s2).
SEEDS: dict[str, tuple[str, int, int]] = {
    "Delta_{12,1}": ("4,1_1", -24, 2048),
    "Delta_{16,1}": ("4,1_1", 216, 32768),
    "Delta_{18,1}": ("4,1_1", -528, 131072),
    "Delta_{20,1}": ("6,1_1", 456, 524288),
    "Delta_{22,1}": ("4,1_1", -288, 2097152),
    "Delta_{8,2}": ("2,1_2", -8, 0),
    "Delta_{6,3}": ("2,1_3", -6, 32),
    "Delta_{8,3}": ("2,1_3", 6, 128),
    "Delta_{5,4,chi4}": ("3,chi4", -4, 0),
    "Delta_{4,5}": ("2,1_5", -4, 8),
    "Phi_{8,5}": ("2,1_5", -14, 128),
    "Delta_{3,7,chi_{7,3}}": ("2,1_7", -3, 4),
    "Phi_{6,7}": ("2,1_7", -10, 32),
    "Delta_{3,8,chi8_1}": ("2,chi8_2", -2, 0),
    "Phi_{4,10}": ("2,1_10", 2, 0),
    "Phi_{4,15}": ("2,1_15", 1, 8),
    "Delta_{2,21}": ("2,1_21", -1, 2),
}


@dataclass(frozen=True)
class PhiExpansion:
    descriptor: str
    coefficients: tuple[int, ...]  # a(0), a(1), ... as printed


_PHI = [
    PhiExpansion("Phi_{10,3}", (0, 1, 18, 81, -188, -1530, 1458, 9128)),
    PhiExpansion("Phi_{8,5}", (0, 1, -14, -48, 68, 125, 672, -1644, 840)),
    PhiExpansion("Phi_{10,5}", (0, 1, -8, -114, -448, -625, 912, 4242, 7680)),
    PhiExpansion("Phi_{6,7}", (0, 1, -10, -14, 68, -56, 140, -49, -360)),
    PhiExpansion("Phi_{8,7}", (0, 1, -6, -42, -92, -84, 252, 343, 1320)),
    PhiExpansion("Phi_{4,10}", (0, 1, 2, -8, 4, 5, -16, -4, 8, 37, 10)),
    # printed prefix is cut after q^9; only the legible terms are kept
    PhiExpansion("Phi_{6,10}", (0, 1, -4, -26, 16, -25, 104, -22, -64, 433)),
    PhiExpansion("Phi_{4,15}", (0, 1, 1, 3, -7, 5, 3, -24, -15, 9, 5)),
    PhiExpansion("Phi_{6,15}", (0, 1, -2, -9, -28, -25, 18, -132, 120, 81)),
    PhiExpansion("Phi_{4,21}", (0, 1, -3, -3, 1, -18, 9, 7, 21, 9, 54)),
]


def phi_expansions() -> dict[str, PhiExpansion]:
    return {p.descriptor: p for p in _PHI}


# descriptors


@dataclass(frozen=True)
class FormDescriptor:
    kind: str  # "E", "Delta" or "Phi"
    weight: int
    level: int
    text: str
    spec: EisensteinSpec | None = None
    character: DirichletCharacter | None = None


def _split_top(body: str) -> list[str]:
    depth, parts, cur = 0, [], ""
    for ch in body:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


@lru_cache(maxsize=None)
def parse_form(text: str) -> FormDescriptor:
    """Parse E{k}^{a,b}, Delta_{k,N}, Delta_{k,N,chi} or Phi_{k,N}."""
    s = text.strip()
    m = re.fullmatch(r"E\{?(\d+)\}?\^\{(.+)\}", s)
    if m:
        parts = _split_top(m.group(2))
        if len(parts) != 2:
            raise ValueError(f"expected two characters in {text!r}")
        spec = EisensteinSpec(int(m.group(1)), parse_character(parts[0]), parse_character(parts[1]))
        return FormDescriptor("E", spec.k, spec.level, s, spec=spec, character=spec.nebentypus)
    m = re.fullmatch(r"(Delta|Phi)_\{(.+)\}", s)
    if m:
        parts = _split_top(m.group(2))
        if len(parts) not in (2, 3) or (m.group(1) == "Phi" and len(parts) != 2):
            raise ValueError(f"malformed descriptor {text!r}")
        k, N = int(parts[0]), int(parts[1])
        chi = trivial(N) if len(parts) == 2 else parse_character(parts[2]).lift(lcm(N, parse_character(parts[2]).modulus))
        return FormDescriptor(m.group(1), k, N, s, character=chi)
    raise ValueError(f"unrecognized form descriptor {text!r}")


def form_character(text: str) -> DirichletCharacter:
    return parse_form(text).character


def _defining_record(desc: str) -> IdentityRecord:
    for rec in catalog():
        if rec.h == desc:
            return rec
    raise KeyError(f"no seed or catalog record defines {desc}")


@lru_cache(maxsize=256)
def resolve_form(text: str, B: int) -> QExpansion:
    """q-expansion of a descriptor through q^B.

    Eisenstein series come from their divisor sums, seeded cusp forms from
    reconstruction against the Eisenstein factor of their pair, and the
    remaining cusp forms from the first catalog identity that produces them.
    """
    d = parse_form(text)
    if d.kind == "E":
        return eisenstein_qexp(d.spec, B)
    if d.text in SEEDS:
        pair_text, c2, s2 = SEEDS[d.text]
        return reconstruct_g(f_series(parse_pair(pair_text), B + 1), c2, s2, B)
    rec = _defining_record(d.text)
    return (resolve_form(rec.f, B) * resolve_form(rec.g, B)).scale(rec.scalar)


# the catalog


def _kind(desc: str) -> str:
    return "E" if desc.startswith("E") else "cusp"


def _case_tag(f: FormDescriptor, g: FormDescriptor) -> str:
    if g.spec is not None and g.spec.psi.conductor == 1 and g.spec.psi.modulus == 1:
        return "case2"
    return "case1_A" if f.spec.phi.canonical_modulus % 2 == 0 else "case1_B"


@lru_cache(maxsize=1)
def _build() -> tuple[IdentityRecord, ...]:
    records = []
    for N, h, scalar, f, g in _ROWS:
        fd, gd = parse_form(f), parse_form(g)
        case = _case_tag(fd, gd)
        psi, phi = fd.character.canonical.label, gd.character.canonical.label
        notes = [_NOTES[(h, f)]] if (h, f) in _NOTES else []
        records.append(
            IdentityRecord(
                id=f"N{N}_w{fd.weight}+{gd.weight}_{psi}_{phi}",
                level=N,
                k=fd.weight,
                l=gd.weight,
                psi=psi,
                phi=phi,
                f=f,
                g=g,
                h=h,
                scalar=scalar,
                case=case,
                table=source_table(N, case, fd.weight, gd.weight),
                dimension_forced=not h.startswith("Phi"),
                notes=notes,
            )
        )
    counts = Counter(r.id for r in records)
    seen: Counter = Counter()
    for r in records:
        if counts[r.id] > 1:
            r.id += "_" + "ab"[seen[r.id]]
            seen[r.id[:-2]] += 1
    return tuple(records)


def catalog() -> list[IdentityRecord]:
    return list(_build())


def table8() -> list[IdentityRecord]:
    return [r for r in catalog() if r.level > 1 and r.k > 2 and r.l > 2]


def find_record(identity: str) -> IdentityRecord:
    for r in catalog():
        if r.id == identity:
            return r
    raise KeyError(identity)


# verification


@dataclass
class VerificationReport:
    id: str
    passed: bool
    sturm: Fraction
    checked_upto: int
    first_mismatch: int | None = None
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "passed": self.passed,
            "sturm": str(self.sturm),
            "checked_upto": self.checked_upto,
            "first_mismatch": self.first_mismatch,
            "failures": self.failures,
        }


def _canonical_h(rec: IdentityRecord, B: int) -> QExpansion:
    """h built without reference to rec's own scalar whenever possible."""
    d = parse_form(rec.h)
    if d.kind == "E" or d.text in SEEDS:
        return resolve_form(rec.h, B)
    base = _defining_record(rec.h)
    return (resolve_form(base.f, B) * resolve_form(base.g, B)).scale(base.scalar)


def verify_identity(rec: IdentityRecord, terms: int | None = None) -> VerificationReport:
    sturm = sturm_bound(rec.k + rec.l, rec.level)
    B = max(terms or 0, ceil(sturm), VERIFY_FLOOR)
    report = VerificationReport(rec.id, True, sturm, B)

    f, g = resolve_form(rec.f, B), resolve_form(rec.g, B)
    h = _canonical_h(rec, B)
    miss = h.first_difference((f * g).scale(rec.scalar), B)
    if miss is not None:
        report.passed, report.first_mismatch = False, miss
        report.failures.append(f"h - scalar*f*g is nonzero at q^{miss}")

    for name, desc, series, weight in (("f", rec.f, f, rec.k), ("g", rec.g, g, rec.l), ("h", rec.h, h, rec.k + rec.l)):
        ev = eigenform_check(series, weight, form_character(desc), VERIFY_FLOOR)
        if not ev:
            report.passed = False
            report.failures.append(f"{name} = {desc}: {ev.detail}")

    for desc, series in ((rec.g, g), (rec.h, h)):
        phi = phi_expansions().get(desc)
        if phi is None:
            continue
        got = [series[n] for n in range(len(phi.coefficients))]
        bad = next((n for n, (a, b) in enumerate(zip(got, phi.coefficients)) if a != b), None)
        if bad is not None:
            report.passed = False
            report.failures.append(f"{desc} differs from its printed prefix at q^{bad}")
    return report


def verify_all(terms: int | None = None) -> list[VerificationReport]:
    return [verify_identity(r, terms) for r in catalog()]


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def catalog_statistics(records: list[IdentityRecord] | None = None) -> dict:
    recs = records if records is not None else catalog()
    types = Counter(f"E*{_kind(r.g)}={_kind(r.h)}" for r in recs)
    by_case = Counter(r.case for r in recs)
    pairs = Counter((r.h, r.scalar.canonical(), frozenset((r.f, r.g))) for r in recs)
    equal = {(r.level, r.h, r.psi, r.phi) for r in recs if r.k == r.l}
    swapped = sum(1 for N, h, a, b in equal if a < b and (N, h, b, a) in equal)
    return {
        "total": len(recs),
        "case1": by_case["case1_A"] + by_case["case1_B"],
        "case1_A": by_case["case1_A"],
        "case1_B": by_case["case1_B"],
        "case2": by_case["case2"],
        "E*E=E": types["E*E=E"],
        "E*E=cusp": types["E*E=cusp"],
        "E*cusp=cusp": types["E*cusp=cusp"],
        "squarefree_level": sum(_squarefree(r.level) for r in recs),
        "non_squarefree_levels": sorted({r.level for r in recs if not _squarefree(r.level)}),
        "equal_weights": sum(r.k == r.l for r in recs),
        "swapped_pairs": swapped,
        "dimension_forced_false": sum(not r.dimension_forced for r in recs),
        "level_one": sum(r.level == 1 for r in recs),
        "by_table": dict(sorted(Counter(r.table for r in recs).items())),
        "duplicate_products": sum(1 for v in pairs.values() if v > 1),
    }
