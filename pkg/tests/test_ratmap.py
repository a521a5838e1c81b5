import pytest

from cremona.constructions import sigma
from cremona.fields import QQ, FieldError, PrimeField
from cremona.parse import parse_poly
from cremona.ratmap import (BasePointError, LinearMap, MapError, RatMap, SingularMatrix,
                            apply_point, compose, compose_with_raw_degree, cross_equal,
                            from_affine_chart, linear_bridge, new_normalized, parse_map)


def M(text, field=QQ):
    return parse_map(text, field)


def test_normalization_examples():
    f = M("[z0^2*z1*z2; z0*z1^2*z2; z0*z1*z2^2]")
    assert f == RatMap.identity(2) and f.degree == 1
    assert M("[2*z0; 2*z1; 2*z2]") == RatMap.identity(2)
    with pytest.raises(MapError):
        M("[z0; z1^2]")


@pytest.mark.parametrize("n,raw", [(2, 4), (3, 9)])
def test_sigma_squared(n, raw):
    s = sigma(n)
    f, r = compose_with_raw_degree(s, s)
    assert f.is_identity() and r == raw


def test_identity_is_neutral():
    f = M("[z0^2; z0*z1; z0*z2 + z1^2]")
    assert compose(RatMap.identity(2), f) == f
    assert compose(f, RatMap.identity(2)) == f


def test_equals_examples():
    assert M("[z0; z1; z2]") == M("[2*z0; 2*z1; 2*z2]")
    assert sigma(2) != RatMap.identity(2)
    assert cross_equal(compose(sigma(2), sigma(2)), RatMap.identity(2))


def test_apply_point_examples():
    s = sigma(2)
    assert apply_point(s, [1, 1, 1]).coords == (1, 1, 1)
    with pytest.raises(BasePointError):
        apply_point(s, [0, 0, 1])
    F = PrimeField(7)
    assert apply_point(sigma(2, F), [1, 2, 3]).coords == (1, 4, 5)


def test_affine_chart_examples():
    eta = from_affine_chart(["z0", "z1", "1/z2"])
    assert eta == M("[z0*z2; z1*z2; z3^2; z2*z3]") and eta.degree == 2
    h2 = from_affine_chart(["z0/(z0-1)", "(z0-z1)/(z0-1)"])
    assert h2 == M("[z0; z0-z1; z0-z2]") and h2.degree == 1
    assert from_affine_chart(["z0", "z1"]).is_identity()


def test_linear_bridge_examples():
    d = LinearMap.diagonal([2, 3, 5])
    assert d.dual().to_ratmap() == M("[15*z0; 10*z1; 6*z2]")
    h = LinearMap([[1, 0, 0], [1, -1, 0], [1, 0, -1]])
    assert h.inverse() == h
    ident = LinearMap.diagonal([1, 1, 1])
    assert ident.dual() == ident
    assert linear_bridge(h.to_ratmap()) == h
    with pytest.raises(SingularMatrix):
        LinearMap([[1, 2], [2, 4]]).inverse()


def test_linear_compose_matches_matrix_product():
    a = LinearMap([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    b = LinearMap([[2, 0, 1], [1, 1, 0], [0, 5, 1]])
    assert compose(a.to_ratmap(), b.to_ratmap()) == (a @ b).to_ratmap()


def test_new_normalized_idempotent():
    f = M("[z0*z1^2; z0^2*z1; z0*z1*z2]")
    assert new_normalized(f.components) == f


def test_field_and_dimension_mismatch():
    with pytest.raises(FieldError):
        compose(sigma(2), sigma(2, PrimeField(7)))
    with pytest.raises(MapError):
        compose(sigma(2), sigma(3))


def test_parse_format_round_trip():
    f = M("[z0*z3 + z1^2; z1*z3; z2*z3; z3^2]")
    assert M(f.format()) == f
    assert parse_poly("z0", 2, QQ).degree == 1
