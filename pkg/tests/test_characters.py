from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import totient

from eigenprod.characters import (
    canonical_characters,
    char_conductor_primitive,
    char_eval,
    char_group,
    char_label,
    char_lift_equiv,
    identify_character,
    parse_character,
    trivial,
)
from eigenprod.cyclotomic import CyclotomicNumber, cyc_root_of_unity


def by_label(N, label):
    return next(c for c in char_group(N) if c.label == label)


def test_group_sizes():
    assert len(char_group(5)) == 4
    assert [c.label for c in char_group(1)] == ["1_1"]
    labels = {c.label for c in char_group(8)}
    assert len(char_group(8)) == 4
    assert {"chi8_1", "chi8_2", "chi4*1_8"} <= labels or {"chi8_1", "chi8_2"} <= labels


def test_named_characters_mod_8():
    c81, c82 = parse_character("chi8_1"), parse_character("chi8_2")
    assert c81(5) == -1 and c81(7) == -1
    assert c81.conductor == 8 and c82.conductor == 8
    assert c81 != c82


def test_values():
    assert char_eval(parse_character("chi_{5,1}"), 2) == cyc_root_of_unity(4, 1)
    assert char_eval(parse_character("chi3"), 2) == -1
    assert char_eval(trivial(6), 3) == 0
    assert char_eval(trivial(6), 5) == 1


def test_conductor_and_primitive_part():
    f, chi0 = char_conductor_primitive(parse_character("chi_{9,3}"))
    assert f == 3 and chi0.is_equivalent(parse_character("chi3"))
    f, chi0 = char_conductor_primitive(parse_character("chi12"))
    assert f == 12 and chi0.conductor == 12
    f, chi0 = char_conductor_primitive(trivial(10))
    assert f == 1 and chi0.modulus == 1


def test_lift_and_equivalence():
    lifted = char_lift_equiv(parse_character("chi3"), 9)
    assert lifted.modulus == 9
    assert char_lift_equiv(lifted, 9, parse_character("chi_{9,3}"))
    assert char_lift_equiv(trivial(2), 4, trivial(4)) is True
    assert char_lift_equiv(trivial(2), 6, trivial(6)) is False
    with pytest.raises(ValueError):
        char_lift_equiv(parse_character("chi3"), 10)


def test_labels():
    assert char_label(by_label(4, "chi4")) == "chi4"
    assert char_label(next(c for c in char_group(5) if c(2) == cyc_root_of_unity(4, 1))) == "chi_{5,1}"
    assert char_label(trivial(15)) == "1_15"
    assert parse_character("chi3").label == "chi3"
    assert parse_character("chi12").label == "chi12"


def test_eight_aliases():
    assert parse_character("chi_{8,1}") == parse_character("chi8_1")
    assert parse_character("chi_{8,2}") == parse_character("chi8_2")


@pytest.mark.parametrize("N", range(1, 41))
def test_labels_round_trip(N):
    for chi in char_group(N):
        back = parse_character(chi.label)
        assert back.is_equivalent(chi), chi.label


def test_identify_character_from_prime_values():
    chi = parse_character("chi_{7,3}")
    # the support is read off the primes where the value vanishes
    values = {p: chi(p) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23)}
    found = identify_character(values, chi.parity, cap=50)
    assert any(c.is_equivalent(chi) for c in found)


def test_canonical_universe_is_duplicate_free():
    chars = canonical_characters(60)
    keys = [c.function_key for c in chars]
    assert len(keys) == len(set(keys))


@pytest.mark.parametrize("N", range(1, 51))
def test_orthogonality_and_parity(N):
    group = char_group(N)
    assert len(group) == int(totient(N))
    for chi in group:
        total = sum((chi(a) for a in range(1, N + 1)), CyclotomicNumber.zero())
        assert (total == 0) != chi.is_trivial() or N == 1
        assert chi(-1) == chi.parity
        assert chi.parity in (1, -1)
        assert N % chi.conductor == 0


@pytest.mark.parametrize("N", [5, 8, 12, 15, 16, 21, 24, 36])
def test_group_closure(N):
    group = set(char_group(N))
    for a in group:
        assert (a**a.order) == trivial(N)
        for b in group:
            assert a * b in group


@pytest.mark.parametrize("N", range(2, 41))
def test_conductor_minimality(N):
    for chi in char_group(N):
        f = chi.conductor
        for d in range(1, f):
            if f % d or N % d:
                continue
            # factoring through d means chi is constant on residues that agree mod d
            assert any(
                gcd(a, N) == 1 and gcd(b, N) == 1 and a % d == b % d and chi(a) != chi(b)
                for a in range(1, N + 1)
                for b in range(1, N + 1)
            )


@st.composite
def character_samples(draw):
    N = draw(st.integers(1, 60))
    group = char_group(N)
    return N, draw(st.sampled_from(group)), draw(st.integers(-500, 500)), draw(st.integers(-500, 500))


@given(character_samples())
def test_multiplicativity(sample):
    N, chi, a, b = sample
    assert chi(a * b) == chi(a) * chi(b)
    assert (chi(a) == 0) == (gcd(a, N) > 1)
    assert chi(1) == 1


@given(character_samples())
def test_primitive_round_trip(sample):
    N, chi, a, _ = sample
    f, chi0 = char_conductor_primitive(chi)
    assert chi0.conductor == f
    assert char_lift_equiv(chi0, N).is_equivalent(chi) or chi0.lift(N)(a) == chi(a)
    assert chi0.lift(N)(a) == chi(a)
