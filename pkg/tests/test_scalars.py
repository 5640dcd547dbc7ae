import random
from fractions import Fraction

import pytest

from tvlab.scalars import QQ, PHI_FIELD, NumberField, format_scalar, parse_scalar


def test_phi_satisfies_its_relation():
    phi = PHI_FIELD.gen()
    assert phi * phi == phi + 1
    assert phi > 0
    assert (phi - 2) < 0  # phi ~ 1.618


def test_inverse_of_global_dim():
    phi = PHI_FIELD.gen()
    x = phi + 2
    inv = x.inverse()
    assert inv * x == PHI_FIELD.one()
    # (2+phi)^-1 = (3-phi)/5
    assert inv == PHI_FIELD(Fraction(3, 5), Fraction(-1, 5))


def test_rational_field_ops():
    half = QQ(Fraction(1, 2))
    assert half + half == QQ.one()
    assert (half * 4) == QQ(2)
    assert (QQ(3) / QQ(4)) == QQ(Fraction(3, 4))
    with pytest.raises(ZeroDivisionError):
        QQ.zero().inverse()


def test_reducible_minpoly_rejected():
    with pytest.raises(ValueError):
        NumberField("quadratic", Fraction(0), Fraction(4))  # x^2 = 4


def _random_scalar(rng):
    a = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    b = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    return PHI_FIELD(a, b)


def test_field_axioms_on_random_elements():
    rng = random.Random(7)
    one = PHI_FIELD.one()
    for _ in range(500):
        x = _random_scalar(rng)
        y = _random_scalar(rng)
        z = _random_scalar(rng)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        if not x.is_zero():
            assert x * x.inverse() == one


def test_sign_is_exact():
    phi = PHI_FIELD.gen()
    # phi = 1.6180..., so 21/13 < phi < 13/8 (Fibonacci convergents)
    assert (phi - Fraction(21, 13)).sign() == 1
    assert (phi - Fraction(13, 8)).sign() == -1
    assert (1 - phi).sign() == -1
    assert PHI_FIELD.zero().sign() == 0


def test_format_and_parse_roundtrip():
    phi = PHI_FIELD.gen()
    cases = {
        PHI_FIELD(2) + phi: "2+phi",
        PHI_FIELD(1) - phi: "1-phi",
        phi: "phi",
        -phi: "-phi",
        (2 + phi).inverse(): "(3-1*phi)/5",
        PHI_FIELD(0, 3): "3*phi",
        QQ(Fraction(1, 2)): "1/2",
        QQ(-2): "-2",
    }
    for value, text in cases.items():
        assert format_scalar(value) == text
        assert parse_scalar(text, value.field) == value
    assert parse_scalar("2+1*phi", PHI_FIELD) == PHI_FIELD(2) + phi
    assert parse_scalar("-1/2+3/2*phi", PHI_FIELD) == PHI_FIELD(Fraction(-1, 2), Fraction(3, 2))


def test_pow():
    phi = PHI_FIELD.gen()
    assert phi ** 3 == 2 * phi + 1
    assert phi ** -1 == phi - 1
    assert phi ** 0 == PHI_FIELD.one()
