from fractions import Fraction

import pytest

from twistkoszul.cyclo import Cyclo, cyclotomic_poly, scalar_inv, scalar_str, zeta


def test_small_orders_are_rational():
    assert zeta(1, 0) == 1
    assert zeta(2, 1) == Fraction(-1)
    assert isinstance(zeta(2, 1), Fraction)


def test_cube_root_relations():
    z = zeta(3, 1)
    assert z * z * z == 1
    assert 1 + z + z * z == 0
    assert z ** 2 == zeta(3, 2)
    assert scalar_inv(z) == zeta(3, 2)


def test_demotion_to_rational():
    z = zeta(3, 1)
    s = z + z * z
    assert isinstance(s, Fraction) and s == -1


def test_mixed_fields_lift_to_lcm():
    i = zeta(4, 1)
    w = zeta(3, 1)
    prod = i * w
    assert prod ** 12 == 1
    assert prod ** 6 == -1
    assert prod ** 4 != 1


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8, 12])
def test_inverse_of_sums(m):
    z = zeta(m, 1)
    a = 2 + z - 3 * z * z
    assert a * scalar_inv(a) == 1


def test_cyclotomic_degrees():
    assert tuple(cyclotomic_poly(12)) == (1, 0, -1, 0, 1)
    assert len(cyclotomic_poly(7)) == 7


def test_string_form():
    assert scalar_str(Fraction(-3, 4)) == "-3/4"
    assert scalar_str(zeta(3, 1)) == "(z)"
    assert isinstance(zeta(3, 1), Cyclo)
