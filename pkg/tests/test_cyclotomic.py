from fractions import Fraction
from math import sqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import iv

from eigenprod.cyclotomic import (
    CyclotomicNumber,
    cyc_arith,
    cyc_embeddings,
    cyc_is_algebraic_integer,
    cyc_root_of_unity,
    cyclotomic_coeffs,
)
from eigenprod.cyclotomic import euler_phi, ivprec

ORDERS = [1, 3, 4, 5, 6, 7, 8, 9, 12, 13]

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def elements(draw, order=None, integral=False):
    m = draw(st.sampled_from(ORDERS)) if order is None else order
    n = euler_phi(m)
    coef = st.integers(-9, 9) if integral else small
    return CyclotomicNumber(m, [draw(coef) for _ in range(n)])


@st.composite
def triples(draw):
    m = draw(st.sampled_from(ORDERS))
    return draw(elements(m)), draw(elements(m)), draw(elements(m))


def zeta6():
    return cyc_root_of_unity(6, 1)


def test_roots_of_unity():
    assert cyc_root_of_unity(1, 0) == 1
    i = cyc_root_of_unity(4, 1)
    assert i * i == -1
    z = zeta6()
    assert cyc_root_of_unity(6, 2) == z - 1
    for m in ORDERS:
        x = cyc_root_of_unity(m, 1)
        p = CyclotomicNumber.one(m)
        for _ in range(m):
            p = p * x
        assert p == 1


def test_cyclotomic_polynomials():
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)
    assert cyclotomic_coeffs(12) == (1, 0, -1, 0, 1)


def test_table_values_multiply_to_seven():
    z = zeta6()
    assert cyc_arith(z + 2, 3 - z, "mul") == 7


def test_inverse_and_division():
    x = CyclotomicNumber(4, [2, 1])
    assert x * cyc_arith(CyclotomicNumber.one(), x, "div") == 1
    with pytest.raises(ZeroDivisionError):
        cyc_arith(x, CyclotomicNumber.zero(4), "div")


def test_equality_across_orders():
    assert cyc_arith(zeta6(), cyc_root_of_unity(12, 2), "eq")
    assert zeta6().lift(12) == zeta6()
    assert hash(zeta6().lift(12)) == hash(zeta6())


def test_embeddings():
    z = zeta6()
    emb = cyc_embeddings(z + 2, 128)
    assert len(emb) == 2
    conj = {c for c, _ in emb}
    assert conj == {z + 2, cyc_root_of_unity(6, 5) + 2}
    for _, ival in emb:
        with ivprec(160):
            assert iv.mpf(7) in ival * ival
        assert ival.b - ival.a < 1e-30
    three = cyc_embeddings(CyclotomicNumber.rational(3), 64)
    assert all(c == 3 and iv.mpf(3) in a for c, a in three)
    i = cyc_root_of_unity(4, 1)
    assert {c for c, _ in cyc_embeddings(i, 64)} == {i, -i}
    with pytest.raises(ValueError):
        cyc_embeddings(i, 32)


def test_algebraic_integers():
    z = zeta6()
    assert cyc_is_algebraic_integer(z + 2)
    assert not cyc_is_algebraic_integer(CyclotomicNumber.rational(Fraction(1, 2)))
    assert cyc_is_algebraic_integer(z * z + 1)
    assert z * z + 1 == z


def test_serialization_round_trip():
    x = CyclotomicNumber(12, [Fraction(1, 3), 0, Fraction(-5, 6), 2])
    rec = x.to_record()
    assert rec["denominator"] == 6
    assert CyclotomicNumber.from_record(rec) == x
    assert CyclotomicNumber.from_text(x.to_text()) == x
    assert x.to_text().startswith("cyc(12; ")


def test_canonical_reduces_to_subfield():
    assert cyc_root_of_unity(12, 2).canonical().order in (3, 6)
    assert (cyc_root_of_unity(8, 2) * 1).canonical().order == 4
    assert CyclotomicNumber.rational(5, 12).canonical().order == 1


@given(triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert a - a == 0


@given(elements())
def test_inverse_axiom(x):
    if x.is_zero():
        return
    assert x * x.inverse() == 1


@given(elements(integral=True))
def test_norm_of_algebraic_integer_is_integer(x):
    assert cyc_is_algebraic_integer(x)
    with ivprec(200):
        prod = iv.mpf(1)
        for _, a in cyc_embeddings(x, 128):
            prod = prod * a
        n = x.norm()
        assert n.denominator == 1
        assert iv.mpf(int(abs(n))) in prod


@given(elements(), st.sampled_from([2, 3, 5]))
def test_embedding_compatibility(x, mult):
    m = x.order * mult
    y = x.lift(m)
    assert y.order == m
    assert cyc_arith(y, x, "eq")


@given(st.sampled_from(ORDERS), st.integers(0, 200))
def test_root_of_unity_abs_interval(m, e):
    z = cyc_root_of_unity(m, e)
    for _, a in cyc_embeddings(z, 96):
        assert a.a <= 1 <= a.b


@given(st.integers(1, 6), st.integers(-3, 3))
def test_surd_abs_interval(a, b):
    z = cyc_root_of_unity(4, 1)
    x = z * b + a
    _, ival = cyc_embeddings(x, 128)[0]
    with ivprec(160):
        assert iv.mpf(a * a + b * b) in ival * ival


def test_lift_requires_divisibility():
    with pytest.raises(ValueError):
        zeta6().lift(8)
