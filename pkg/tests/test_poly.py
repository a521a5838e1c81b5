from fractions import Fraction

import pytest

from cremona.fields import QQ, PrimeField
from cremona.gcd import gcd_many
from cremona.parse import ParseError, format_poly, parse_poly
from cremona.poly import NotDivisible, PolyError, eval_point, exact_div, substitute


def P(text, n=3, field=QQ):
    return parse_poly(text, n, field)


def test_products():
    assert P("z0+z1") * P("z0-z1") == P("z0^2 - z1^2")
    assert P("z1*z2") * P("z0*z2") == P("z0*z1*z2^2")
    F = PrimeField(2)
    assert P("z0+z1", 2, F) ** 2 == P("z0^2+z1^2", 2, F)


def test_substitute_examples():
    imgs = [P("z1*z2"), P("z0*z2"), P("z0*z1")]
    assert substitute(P("z0*z1"), imgs) == P("z0*z1*z2^2")
    assert substitute(P("z0"), imgs) == imgs[0]
    assert substitute(P("z0^2+z1^2", 2), [P("z0", 2), P("z0", 2)]) == P("2*z0^2", 2)


def test_gcd_examples():
    assert gcd_many([P("z0^2*z1*z2"), P("z0*z1^2*z2"), P("z0*z1*z2^2")]) == P("z0*z1*z2")
    assert gcd_many([P("z0^2-z1^2", 2), P("z0^2+2*z0*z1+z1^2", 2)]) == P("z0+z1", 2)
    assert gcd_many([P("z0", 2), P("z1", 2)]).degree == 0


def test_gcd_nonmonomial_multivariate():
    a, b, c = P("z0*z2 + z1^2"), P("z0 - 3*z2"), P("z1 + z2")
    g = gcd_many([a * b, a * c * c])
    assert exact_div(g, a).degree == 0


def test_exact_div_examples():
    assert exact_div(P("z0^2-z1^2", 2), P("z0-z1", 2)) == P("z0+z1", 2)
    assert exact_div(P("z0*z1*z2^2"), P("z2")) == P("z0*z1*z2")
    with pytest.raises(NotDivisible):
        exact_div(P("z0^2", 2), P("z1", 2))


def test_eval_examples():
    assert eval_point(P("z1*z2"), [1, 1, 1]) == QQ.elem(1)
    assert eval_point(P("z0*z3 - z1*z2", 4), [0, 0, 0, 1]).is_zero()
    F = PrimeField(7)
    assert eval_point(P("z0^2+z1^2", 2, F), [2, 3]) == F.elem(6)


def test_parse_examples():
    p = P("z0^2 - 2*z1*z2")
    assert p.degree == 2 and len(p) == 2
    with pytest.raises((ParseError, PolyError)):
        P("z0 + z1^2")
    q = P("3/2*z0*z1")
    assert q.coeff((1, 1, 0)) == QQ.elem(Fraction(3, 2))


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as ei:
        P("z0 + $z1")
    assert "position" in str(ei.value)
    with pytest.raises((ParseError, PolyError)):
        P("z7")


def test_format_is_grlex_descending():
    assert format_poly(P("z2^2 + z0*z1 + z0^2")) == "z0^2 + z0*z1 + z2^2"


def test_mismatched_nvars():
    with pytest.raises(PolyError):
        P("z0", 2) + P("z0", 3)
