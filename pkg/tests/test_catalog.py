import json
from dataclasses import replace
from fractions import Fraction

import pytest

from eigenprod.catalog import (
    catalog,
    catalog_statistics,
    find_record,
    parse_form,
    phi_expansions,
    resolve_form,
    table8,
    verify_identity,
)
from eigenprod.cyclotomic import CyclotomicNumber

from oracles import eta24, eta_quotient

ETA_FORMS = {
    "Delta_{12,1}": {1: 24},
    "Delta_{8,2}": {1: 8, 2: 8},
    "Delta_{6,3}": {1: 6, 3: 6},
    "Delta_{6,4}": {2: 12},
    "Delta_{4,5}": {1: 4, 5: 4},
    "Delta_{4,6}": {1: 2, 2: 2, 3: 2, 6: 2},
    "Delta_{4,8}": {2: 4, 4: 4},
    "Delta_{4,9}": {3: 8},
}


def test_counts():
    recs = catalog()
    assert len(recs) == 61
    assert len({r.id for r in recs}) == 61
    assert sum(r.level == 1 for r in recs) == 16
    assert sum(r.table == 4 for r in recs) == 12
    assert sum(r.table == 5 for r in recs) == 4


def test_statistics():
    stats = catalog_statistics()
    assert stats["case1_A"] == 9 and stats["case1_B"] == 46 and stats["case2"] == 6
    assert (stats["E*E=E"], stats["E*E=cusp"], stats["E*cusp=cusp"]) == (9, 28, 24)
    assert stats["squarefree_level"] == 54
    assert stats["non_squarefree_levels"] == [4, 8, 9]
    assert stats["dimension_forced_false"] == 7


def test_table8():
    recs = table8()
    assert len(recs) == 9
    assert {r.level for r in recs} == {3, 4, 5}
    assert all(r.k > 2 and r.l > 2 for r in recs)


def test_phi_record():
    rec = next(r for r in catalog() if r.h == "Phi_{10,3}" and r.k == 5)
    assert rec.scalar == 3 and rec.f == "E5^{1_1,chi3}" and rec.g == "E5^{chi3,1_1}"
    assert not rec.dimension_forced
    series = resolve_form("Phi_{10,3}", 10)
    assert [series[n] for n in range(5)] == [0, 1, 18, 81, -188]


def test_dimension_forced_flags():
    unforced = [r for r in catalog() if not r.dimension_forced]
    assert len(unforced) == 7
    assert all(r.h.startswith("Phi_") for r in unforced)
    assert all(r.dimension_forced for r in catalog() if not r.h.startswith("Phi_"))


@pytest.mark.parametrize("desc", sorted(phi_expansions()))
def test_printed_phi_prefixes(desc):
    printed = phi_expansions()[desc].coefficients
    series = resolve_form(desc, 20)
    assert [series[n] for n in range(len(printed))] == list(printed)


@pytest.mark.parametrize("desc", sorted(ETA_FORMS))
def test_cusp_forms_against_eta_quotients(desc):
    assert resolve_form(desc, 60) == eta_quotient(ETA_FORMS[desc], 60)


def test_minimal_levels():
    rec = next(r for r in catalog() if r.h == "Delta_{8,2}" and r.k == 3)
    assert rec.level == 4
    assert find_record("N6_w2+2_chi12_chi12").h == "Delta_{4,6}"


def test_verify_examples():
    rep = verify_identity(find_record("N3_w3+3_chi3_chi3"))
    assert rep.passed and rep.sturm == 5 and rep.checked_upto == 200
    rep = verify_identity(find_record("N1_w4+4_1_1_1_1"))
    assert rep.passed and rep.sturm == Fraction(5, 3)
    rep = verify_identity(find_record("N1_w4+12_1_1_1_1"), terms=300)
    assert rep.passed and rep.checked_upto == 300


def test_mutated_scalar_fails():
    rec = replace(find_record("N3_w3+3_chi3_chi3"), scalar=CyclotomicNumber.rational(-8))
    rep = verify_identity(rec)
    assert not rep.passed
    # E3^{1,chi3} has constant term -1/9, so the first discrepancy is already at q^1
    assert rep.first_mismatch == 1


def test_level_one_delta_is_ramanujan():
    assert resolve_form("Delta_{12,1}", 40) == eta24(40)


def test_parse_form():
    d = parse_form("E4^{1_1,chi_{5,2}}")
    assert (d.kind, d.weight, d.level) == ("E", 4, 5)
    d = parse_form("Delta_{5,7,chi_{7,3}}")
    assert (d.kind, d.weight, d.level) == ("Delta", 5, 7)
    assert d.character.conductor == 7
    assert parse_form("Phi_{10,3}").kind == "Phi"
    for bad in ("E4", "Phi_{10,3,chi3}", "Delta_{4}", "F4^{1_1,1_1}", "E4^{1_1}"):
        with pytest.raises(ValueError):
            parse_form(bad)
    with pytest.raises(KeyError):
        find_record("N99_w1+1_x_y")


def test_json_schema():
    keys = {"id", "level", "k", "l", "psi", "phi", "f", "g", "h", "scalar", "case", "table", "dimension_forced"}
    for rec in catalog():
        data = json.loads(json.dumps(rec.to_json()))
        assert set(data) == keys
        assert CyclotomicNumber.from_record(data["scalar"]) == rec.scalar
        assert data["case"] in ("case1_A", "case1_B", "case2")
        assert data["table"] in (4, 5, 6, 8)


def test_printed_scalar_notes():
    noted = [r for r in catalog() if r.notes]
    assert any("zeta6+3" in n for r in noted for n in r.notes)
    zeta = CyclotomicNumber.root_of_unity(6)
    for r in catalog():
        if r.f == "E2^{1_1,chi_{7,4}}":
            assert r.scalar == zeta - 3
