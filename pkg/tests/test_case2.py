import re
from fractions import Fraction

import pytest

from eigenprod.bernoulli import bernoulli_classical, bernoulli_generalized
from eigenprod.case2 import (
    Case2Candidate,
    D_exact,
    bound_D,
    evaluate_relations,
    infer_psi,
    relation_sides,
    level_one_weight_pairs,
    principal_levels,
    r2_polynomial,
    run_case2,
    series_relation,
    valid_r2_roots,
)
from eigenprod.characters import parse_character, trivial
from eigenprod.cyclotomic import CyclotomicNumber, cyc_root_of_unity

ONE = trivial(1)
I = cyc_root_of_unity(4, 1)
RELATION_INDEX = {20: 0, 21: 2, 22: 3, 23: 4, 24: 8}


@pytest.fixture(scope="module")
def small_search():
    return run_case2(level_cap=30, weight_cap=12)


def test_e8_relations():
    cand = Case2Candidate(4, 4, ONE, ONE)
    assert cand.alpha == Fraction(1, 240) and cand.gamma == Fraction(1, 480)
    sides = {n: (lhs.to_fraction(), rhs.to_fraction()) for n, (lhs, rhs) in relation_sides(cand).items()}
    assert sides[20] == (Fraction(1, 57600), Fraction(1, 57600))
    assert sides[21] == (Fraction(16, 15), Fraction(16, 15))
    assert all(evaluate_relations(cand).values())
    assert cand.scalar == 120


def test_perturbed_alpha_breaks_the_constant_relation():
    cand = Case2Candidate(4, 4, ONE, ONE)
    cand.__dict__["alpha"] = CyclotomicNumber.rational(Fraction(1, 239))
    assert not evaluate_relations(cand)[20]


def test_parity_mismatch_is_an_error():
    with pytest.raises(ValueError):
        evaluate_relations(Case2Candidate(2, 4, parse_character("chi3"), ONE))


@pytest.mark.parametrize(
    "k, l, psi, phi, holds",
    [
        (4, 4, "1_1", "1_1", True),
        (4, 6, "1_1", "1_1", True),
        (2, 3, "1_3", "chi3", True),
        (2, 2, "1_5", "chi_{5,2}", True),
        (4, 8, "1_1", "1_1", False),
        (2, 2, "1_7", "1_7", False),
    ],
)
def test_relations_agree_with_series(k, l, psi, phi, holds):
    cand = Case2Candidate(k, l, parse_character(psi), parse_character(phi))
    rel = evaluate_relations(cand)
    coeffs = {n: series_relation(cand, m) for n, m in RELATION_INDEX.items()}
    if holds:
        assert all(rel.values())
        assert all(c.is_zero() for c in coeffs.values())
    else:
        assert not all(rel.values())
        assert not all(c.is_zero() for c in coeffs.values())


@pytest.mark.parametrize("label, expected", [("chi_{5,1}", [I]), ("chi_{5,3}", [-I])])
def test_r2_roots_weight_three_mod_five(label, expected):
    phi = parse_character(label)
    beta = bernoulli_generalized(3, phi) * Fraction(-1, 6)
    roots = valid_r2_roots(r2_polynomial(beta, phi(2) * 4, phi(3) * 9), 3)
    assert [x for x, _ in roots] == expected
    assert [k for _, k in roots] == [1]


@pytest.mark.parametrize("label", ["chi_{7,1}", "chi_{7,3}", "chi_{7,5}"])
def test_r2_roots_weight_three_mod_seven(label):
    phi = parse_character(label)
    beta = bernoulli_generalized(3, phi) * Fraction(-1, 6)
    assert valid_r2_roots(r2_polynomial(beta, phi(2) * 4, phi(3) * 9), 3) == []


def test_D_bounds():
    assert bound_D(2, 4).b < 0.53
    assert bound_D(3, 4).b < 0.49
    assert bound_D(2, 3).b < 1.59
    for l in range(5, 13):
        for k in range(2, l):
            assert bound_D(k, l).b < 1
    d = bound_D(2, 4)
    assert d.b - d.a < 1e-10
    with pytest.raises(ValueError):
        D_exact(4, 4)


def test_level_one_weight_pairs():
    assert level_one_weight_pairs(30) == [(4, 4), (4, 6), (4, 10), (6, 8)]
    for l in range(2, 29, 2):
        B2, Bl = bernoulli_classical(2), bernoulli_classical(l)
        assert (2 + l) * B2 * Bl != bernoulli_classical(2 + l) * (l * B2 + 2 * Bl)


def test_principal_levels():
    assert principal_levels(2, Fraction(11, 6)) == [138]
    assert principal_levels(2, Fraction(23, 52)) == []
    assert principal_levels(2, Fraction(1, 6)) == [5]
    assert principal_levels(2, cyc_root_of_unity(6, 1)) == []


def test_infer_psi_weight_two_times_three():
    alpha, r, psis = infer_psi(Fraction(-1, 9), parse_character("chi3"), 3, 2)
    assert alpha == Fraction(1, 12)
    assert r[3] == 0
    assert [p.label for p in psis] == ["1_3"]


def test_small_search(small_search):
    ids = [r.id for r in small_search.records]
    assert ids == ["N1_w4+4_1_1_1_1", "N1_w4+6_1_1_1_1", "N3_w2+3_1_3_chi3", "N5_w2+2_1_5_chi_{5,2}"]
    assert len(small_search.tuples) == 5
    scalars = {r.id: r.scalar for r in small_search.records}
    assert scalars["N3_w2+3_1_3_chi3"] == -36
    assert scalars["N5_w2+2_1_5_chi_{5,2}"] == -30
    assert scalars["N1_w4+6_1_1_1_1"] == Fraction(5040, 11)


def test_equal_weight_filter_agrees_with_enumeration(small_search):
    seen = 0
    for line in small_search.log:
        m = re.match(r"k = l = (\d+): .* exhaustive q\^2 matches (\d+)", line)
        if m:
            seen += 1
            k, hits = int(m.group(1)), int(m.group(2))
            assert hits == (2 if k == 2 else 0)
    assert seen == 5


def test_three_divides_branch(small_search):
    text = "\n".join(small_search.log)
    assert "(r2=2, s2=-4)" in text
    assert "alpha=1/12, beta=-1/9" in text


def test_unequal_weight_branch(small_search):
    text = "\n".join(small_search.log)
    assert "phi = chi_{5,1}: valid r2 roots i (k=1)" in text
    assert "phi = chi_{5,3}: valid r2 roots -i (k=1)" in text
    assert "phi = chi_{7,1}: valid r2 roots none" in text
