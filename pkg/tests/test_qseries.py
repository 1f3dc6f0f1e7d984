from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import divisors, mobius

from eigenprod.bernoulli import bernoulli_generalized
from eigenprod.characters import char_group, parse_character, trivial
from eigenprod.cyclotomic import CyclotomicNumber
from eigenprod.qseries import (
    EisensteinSpec,
    ParityError,
    QExpansion,
    eigenform_check,
    eisenstein_lift,
    eisenstein_qexp,
    hecke_apply,
    qexp_mul,
    sigma_twisted,
    sturm_bound,
    working_truncation,
)

from oracles import eta24

ONE = trivial(1)


def test_eta_oracle_values():
    delta = eta24(12)
    assert [int(c.to_fraction()) for c in delta.coeffs[:6]] == [0, 1, -24, 252, -1472, 4830]


def test_sigma_examples():
    assert sigma_twisted(3, ONE, ONE, 6) == 252
    assert sigma_twisted(1, parse_character("chi_{5,2}"), ONE, 2) == 1
    assert sigma_twisted(3, trivial(2), ONE, 2) == 8
    with pytest.raises(ValueError):
        sigma_twisted(1, ONE, ONE, 0)


def test_eisenstein_examples():
    e4 = eisenstein_qexp(EisensteinSpec(4, ONE, ONE), 10)
    assert e4[0] == Fraction(1, 240) and e4[2] == 9
    assert len(e4.coeffs) == 11
    chi = parse_character("chi_{5,2}")
    f = eisenstein_qexp(EisensteinSpec(4, ONE, chi), 10)
    omega = CyclotomicNumber.rational(-8) / bernoulli_generalized(4, chi)
    assert omega == 1
    assert [c.to_fraction() for c in f.scale(omega).coeffs[:5]] == [1, 1, -7, -26, 57]
    e3 = eisenstein_qexp(EisensteinSpec(3, ONE, parse_character("chi3")), 5)
    assert e3[0] == Fraction(-1, 9)


def test_parity_violation_is_flagged():
    with pytest.raises(ParityError):
        eisenstein_qexp(EisensteinSpec(2, ONE, parse_character("chi3")), 5)
    with pytest.raises(ValueError):
        eisenstein_qexp(EisensteinSpec(2, ONE, ONE), 5)
    assert eisenstein_qexp(EisensteinSpec(2, ONE, ONE), 5, formal=True)[0] == Fraction(-1, 24)


def test_lift_examples():
    g = eisenstein_lift(2, trivial(2), 30)
    assert g[0] == Fraction(1, 24)
    for n in range(1, 31):
        assert g[n] == sum(d for d in divisors(n) if d % 2)
    assert eisenstein_lift(2, trivial(4), 30) == g
    chi = parse_character("chi_{5,2}")
    assert eisenstein_lift(4, chi, 30) == eisenstein_qexp(EisensteinSpec(4, ONE, chi), 30)


@pytest.mark.parametrize("N", range(1, 31))
def test_lift_closed_form(N):
    B = 24
    for chi in char_group(N):
        for k in range(1, 7):
            if chi.parity != (-1) ** k or (k == 1 and N == 1):
                continue
            h = eisenstein_lift(k, chi, B)
            assert h[0] == -bernoulli_generalized(k, chi) / (2 * k)
            for n in range(1, B + 1):
                want = sum((chi(d) * d ** (k - 1) for d in divisors(n)), CyclotomicNumber.zero())
                assert h[n] == want, (k, chi.label, n)


@pytest.mark.parametrize("N1", [2, 3, 5, 6, 10, 15, 30])
def test_telescoped_weight_two_combination(N1):
    B = 40
    e2 = eisenstein_qexp(EisensteinSpec(2, ONE, ONE), B, formal=True)
    p = min(q for q in (2, 3, 5) if N1 % q == 0)

    def combo(g, M):
        total = QExpansion([0] * (B + 1))
        for d in divisors(M):
            total = total + g.dilate(d).scale(int(mobius(d)) * d)
        return total

    e2p = e2 - e2.dilate(p).scale(p)
    assert e2p == eisenstein_qexp(EisensteinSpec(2, ONE, trivial(p)), B)
    assert combo(e2, N1) == combo(e2p, N1 // p)
    assert combo(e2, N1) == eisenstein_lift(2, trivial(N1), B)


@pytest.mark.parametrize("N", [1, 3, 4, 5, 7, 8, 12, 13, 15])
def test_eisenstein_series_are_eigenforms(N):
    for psi in char_group(N):
        for phi in char_group(N):
            for k in (2, 3, 4):
                spec = EisensteinSpec(k, psi.primitive, phi.primitive)
                if not spec.parity_ok() or (k == 2 and spec.psi.modulus == 1 and spec.phi.modulus == 1):
                    continue
                f = eisenstein_qexp(spec, 200)
                assert eigenform_check(f, k, spec.nebentypus, 200), spec.descriptor()


def test_product_examples():
    one_q = QExpansion([1, 1, 0, 0])
    assert qexp_mul(one_q, one_q) == QExpansion([1, 2, 1, 0])
    assert qexp_mul(one_q, QExpansion([0, 0, 0, 0])).is_zero()
    w, c2 = CyclotomicNumber.rational(3), CyclotomicNumber.rational(5)
    prod = qexp_mul(QExpansion([1, w, 7]), QExpansion([0, 1, c2]))
    assert prod[2] == w + c2
    assert qexp_mul(QExpansion([1, 2, 3, 4]), QExpansion([1, 1])).truncation == 1


def test_product_matches_naive_convolution_with_cyclotomic_entries():
    chi = parse_character("chi_{7,2}")
    f = eisenstein_qexp(EisensteinSpec(2, ONE, chi), 25)
    g = eisenstein_qexp(EisensteinSpec(3, ONE, parse_character("chi_{5,1}")), 25)
    h = qexp_mul(f, g)
    for n in range(26):
        assert h[n] == sum((f[i] * g[n - i] for i in range(n + 1)), CyclotomicNumber.zero())


cyc_coeffs = st.builds(
    lambda m, xs: CyclotomicNumber(m, xs),
    st.sampled_from([1, 4, 6]),
    st.lists(st.fractions(-5, 5, max_denominator=4), min_size=2, max_size=2),
)
series = st.lists(cyc_coeffs, min_size=1, max_size=9).map(QExpansion)


@given(series, series, series)
def test_product_commutative_associative(f, g, h):
    assert qexp_mul(f, g) == qexp_mul(g, f)
    assert qexp_mul(qexp_mul(f, g), h) == qexp_mul(f, qexp_mul(g, h))


def test_hecke_examples():
    delta = eta24(60)
    assert hecke_apply(delta, 1, 12, ONE) == delta
    t2 = hecke_apply(delta, 2, 12, ONE)
    assert t2 == delta.truncate(30).scale(-24)
    e4 = eisenstein_qexp(EisensteinSpec(4, ONE, ONE), 60)
    assert hecke_apply(e4, 2, 4, ONE) == e4.truncate(30).scale(9)
    with pytest.raises(ValueError, match="truncation"):
        hecke_apply(QExpansion([1, 2]), 3, 4, ONE)


@given(st.lists(st.integers(-50, 50), min_size=31, max_size=31), st.sampled_from([1, 5, 7, 12]), st.integers(2, 6))
def test_hecke_commutation(coeffs, N, k):
    f = QExpansion(coeffs)
    chi = char_group(N)[-1]
    t6 = hecke_apply(f, 6, k, chi)
    t23 = hecke_apply(hecke_apply(f, 3, k, chi), 2, k, chi)
    t32 = hecke_apply(hecke_apply(f, 2, k, chi), 3, k, chi)
    assert t6 == t23.truncate(t6.truncation) == t32.truncate(t6.truncation)


def test_eigenform_check_examples():
    delta = eta24(100)
    assert eigenform_check(delta, 12, ONE, 100)
    bad = QExpansion([0] + [1] * 10)
    report = eigenform_check(bad, 2, ONE, 10)
    assert not report and report.first_violation == 4
    e4 = eisenstein_qexp(EisensteinSpec(4, ONE, ONE), 100)
    assert eigenform_check(e4, 4, ONE, 100)
    with pytest.raises(ValueError):
        eigenform_check(delta, 12, ONE, 101)


def test_sturm_bound():
    assert sturm_bound(8, 2) == 3
    assert sturm_bound(12, 1) == 2
    assert sturm_bound(4, 21) == 129
    assert sturm_bound(26, 1) == Fraction(1) + Fraction(26, 12)
    assert working_truncation(4, 21) == 258
    assert working_truncation(12, 1) == 200
