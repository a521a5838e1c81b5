from fractions import Fraction

import pytest

from cremona.fields import (QQ, Cyclotomic, FieldError, PrimeField, arith, parse_field,
                            root_of_unity)


def test_rational_addition():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_gf7_division():
    F = PrimeField(7)
    assert F.div(3, 5) == 2
    assert arith("div", F.elem(3), F.elem(5)) == F.elem(2)


def test_cyclotomic_square_of_zeta():
    K = Cyclotomic(3)
    z = root_of_unity(K)
    assert z * z == K.elem(-1) - z


@pytest.mark.parametrize("p", [3, 5, 7])
def test_root_of_unity_order(p):
    K = Cyclotomic(p)
    z = root_of_unity(K)
    assert z ** p == K.elem(1)
    assert all(z ** k != K.elem(1) for k in range(1, p))


def test_root_of_unity_needs_cyclotomic():
    with pytest.raises(FieldError):
        root_of_unity(PrimeField(7))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_powers_of_zeta_sum_to_zero(p):
    K = Cyclotomic(p)
    z = root_of_unity(K)
    total = K.elem(0)
    for k in range(p):
        total = total + z ** k
    assert total.is_zero()


def test_bad_moduli():
    for bad in (4, 1, 2 ** 31 + 11):
        with pytest.raises(FieldError):
            PrimeField(bad)
    with pytest.raises(FieldError):
        Cyclotomic(2)
    with pytest.raises(FieldError):
        Cyclotomic(9)


def test_zero_division():
    with pytest.raises((FieldError, ZeroDivisionError)):
        QQ.elem(1) / QQ.elem(0)
    with pytest.raises((FieldError, ZeroDivisionError)):
        PrimeField(5).inv(0)


def test_parse_field():
    assert parse_field("Q") == QQ
    assert parse_field("GF(7)") == PrimeField(7)
    assert parse_field("CYC(5)") == Cyclotomic(5)
    with pytest.raises(FieldError):
        parse_field("R")


def test_descriptor_mismatch():
    with pytest.raises(FieldError):
        PrimeField(5).elem(1) + PrimeField(7).elem(1)


def test_cyclotomic_inverse():
    K = Cyclotomic(5)
    z = root_of_unity(K)
    a = K.elem(2) + z * 3 - z ** 3
    assert a * a.inverse() == K.elem(1)
