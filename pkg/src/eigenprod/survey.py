"""Run both searches and reconcile them with the embedded catalog."""
from __future__ import annotations

from dataclasses import dataclass, field

from .case1 import search_case1
from .case2 import run_case2
from .catalog import catalog, catalog_statistics, parse_form, resolve_form
from .characters import DirichletCharacter, trivial
from .cyclotomic import CyclotomicNumber
from .qseries import EisensteinSpec, QExpansion, eisenstein_qexp
from .records import IdentityRecord

__all__ = ["SearchReport", "full_search", "join_with_catalog"]

PREFIX = 30


@dataclass
class _Found:
    """One searched tuple reduced to what the join compares."""

    case: str
    k: int
    psi: DirichletCharacter
    scalar: CyclotomicNumber
    g: QExpansion
    record: IdentityRecord


@dataclass
class SearchReport:
    case1: list[IdentityRecord] = field(default_factory=list)
    case2: list[IdentityRecord] = field(default_factory=list)
    case2_tuples: int = 0
    matched: dict[str, list[str]] = field(default_factory=dict)  # catalog id -> searched ids
    unmatched_search: list[str] = field(default_factory=list)
    ambiguous: list[str] = field(default_factory=list)
    unmatched_catalog: list[str] = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    @property
    def identities(self) -> list[IdentityRecord]:
        return self.case1 + self.case2

    @property
    def exact(self) -> bool:
        return not (self.unmatched_search or self.ambiguous or self.unmatched_catalog)

    def statistics(self) -> dict:
        by_id = {r.id: r for r in catalog()}
        stats = catalog_statistics([by_id[i] for i in self.matched])
        stats["case2_tuples"] = self.case2_tuples
        # identities reached by more than one searched tuple
        stats["shared_identities"] = sum(len(v) > 1 for v in self.matched.values())
        stats["equal_weight_tuples"] = sum(
            by_id[i].k == by_id[i].l for i, found in self.matched.items() for _ in found
        )
        stats["searched"] = len(self.identities)
        return stats

    def summary(self) -> str:
        status = "exact" if self.exact else "MISMATCH"
        return f"{len(self.identities)} identities, catalog match: {status}"


def _same(a: QExpansion, b: QExpansion) -> bool:
    return a.first_difference(b, PREFIX) is None


def _catalog_keys():
    """(k, psi, scalar, g prefix, record) for every catalog record, both factor orders for Case 2."""
    keys = []
    for rec in catalog():
        f, g = parse_form(rec.f), parse_form(rec.g)
        keys.append((f.weight, f.spec.phi, rec.scalar, resolve_form(rec.g, PREFIX), rec))
        if rec.case == "case2":
            keys.append((g.weight, g.spec.phi, rec.scalar, resolve_form(rec.f, PREFIX), rec))
    return keys


def join_with_catalog(found: list[_Found], report: SearchReport, cases: tuple[str, ...] = ("case1", "case2")) -> None:
    """Match searched tuples to catalog records; only records whose case is in cases count as missing."""
    keys = _catalog_keys()
    hit: dict[str, list[str]] = {}
    for item in found:
        ids = sorted({
            rec.id
            for k, psi, scalar, g, rec in keys
            if k == item.k and psi.is_equivalent(item.psi) and scalar == item.scalar and _same(g, item.g)
        })
        if not ids:
            report.unmatched_search.append(item.record.id)
        elif len(ids) > 1:
            report.ambiguous.append(f"{item.record.id} -> {', '.join(ids)}")
        else:
            hit.setdefault(ids[0], []).append(item.record.id)
    report.matched = hit
    report.unmatched_catalog = [r.id for r in catalog() if r.id not in hit and r.case.startswith(cases)]


def full_search(case: str = "all", pairs=None, level_cap: int = 100, weight_cap: int = 30, terms: int | None = None) -> SearchReport:
    """case is "1", "2" or "all"; the catalog join is restricted to the searched case."""
    report = SearchReport()
    found: list[_Found] = []
    if case in ("1", "all"):
        verified, rejected = search_case1(pairs, terms)
        report.case1 = [c.record for c in verified]
        report.log.append(f"case 1: {len(verified)} verified, {len(rejected)} candidates rejected")
        for c in verified:
            found.append(_Found("case1", c.pair.k, c.pair.psi, c.pair.omega, c.g, c.record))
    if case in ("2", "all"):
        res = run_case2(level_cap, weight_cap)
        report.case2 = res.records
        report.case2_tuples = len(res.tuples)
        report.log.extend(res.log)
        one = trivial(1)
        for c in res.tuples:
            g = eisenstein_qexp(EisensteinSpec(c.l, one, c.phi), PREFIX)
            found.append(_Found("case2", c.k, c.psi, c.scalar, g, c.record()))
    scope = {"1": ("case1",), "2": ("case2",), "all": ("case1", "case2")}[case]
    join_with_catalog(found, report, scope)
    return report
