"""Independent reference computations and printed table values shared by the tests."""
from fractions import Fraction

from eigenprod.cyclotomic import cyc_root_of_unity
from eigenprod.qseries import QExpansion

I = cyc_root_of_unity(4, 1)
Z6 = cyc_root_of_unity(6, 1)

# every printed value of 2k/B_{k,chi}
PRINTED = {
    (2, "1_1"): 24, (4, "1_1"): -240, (6, "1_1"): 504,
    (8, "1_1"): -480, (10, "1_1"): 264, (14, "1_1"): 24,
    (2, "1_2"): -24, (2, "1_3"): -12, (2, "1_5"): -6, (2, "1_6"): 12, (2, "1_7"): -4,
    (2, "1_10"): 6, (2, "1_13"): -2, (2, "1_14"): 4, (2, "1_15"): 3, (2, "1_21"): 2,
    (2, "1_26"): 2, (2, "1_30"): -3, (2, "1_35"): 1, (2, "1_39"): 1, (2, "1_42"): -2,
    (2, "1_70"): -1, (2, "1_78"): -1,
    (2, "chi_{5,2}"): 5, (2, "chi_{7,2}"): Z6 + 2, (2, "chi_{7,4}"): 3 - Z6,
    (2, "chi_{8,2}"): 2, (2, "chi_{9,2}"): 2 - Z6, (2, "chi_{9,4}"): Z6 + 1,
    (2, "chi12"): 1, (2, "chi_{13,4}"): -(Z6 * Z6), (2, "chi_{13,8}"): Z6 * Z6 + 1,
    (2, "chi_{13,6}"): 1, (3, "chi3"): 9, (3, "chi4"): 4,
    (3, "chi_{5,1}"): 2 - I, (3, "chi_{5,3}"): 2 + I, (3, "chi_{7,1}"): 1 - Z6,
    (3, "chi_{7,5}"): Z6, (4, "chi_{5,2}"): -1, (5, "chi3"): -3,
}


def _eta_power(d: int, e: int, B: int) -> list[int]:
    """prod_n (1 - q^(dn))^e through q^B."""
    poly = [1] + [0] * B
    for n in range(1, B // d + 1):
        for _ in range(e):
            for m in range(B, n * d - 1, -1):
                poly[m] -= poly[m - n * d]
    return poly


def eta_quotient(exponents: dict[int, int], B: int) -> QExpansion:
    """prod_d eta(dz)^e_d through q^B; the q-order sum(d e_d)/24 must be a positive integer."""
    shift = Fraction(sum(d * e for d, e in exponents.items()), 24)
    assert shift.denominator == 1 and shift > 0
    poly = [1] + [0] * B
    for d, e in exponents.items():
        factor = _eta_power(d, e, B)
        poly = [sum(poly[i] * factor[n - i] for i in range(n + 1)) for n in range(B + 1)]
    s = int(shift)
    return QExpansion([0] * s + poly[: B + 1 - s])


def eta24(B: int) -> QExpansion:
    """Delta = q prod (1 - q^n)^24."""
    return eta_quotient({1: 24}, B)
