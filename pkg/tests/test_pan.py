import random

import pytest

from cremona.constructions import sigma
from cremona.fields import QQ
from cremona.pan import (FAMILIES, PanError, PanSpec, birationality_criterion, blowdown_build,
                         build_psi, build_psi_tilde, contraction_check, generic_fiber_size,
                         random_R, random_panspec)
from cremona.parse import parse_components, parse_poly
from cremona.poly import PolyError, divides, zn_split
from cremona.ratmap import RatMap, parse_map


def spec(P, Q, R):
    n = len(R)
    return PanSpec.make(parse_poly(P, n + 1, QQ), parse_poly(Q, n + 1, QQ),
                        [parse_poly(r, n, QQ) for r in R])


def test_zn_split_examples():
    a, b = zn_split(parse_poly("z3*z0 + z1^2", 4, QQ))
    assert str(a) == "z0" and str(b) == "z1^2"
    a, b = zn_split(parse_poly("z0*z3 - z1*z2", 4, QQ))
    assert str(a) == "z0" and str(b) == "-z1*z2"
    with pytest.raises(PolyError):
        zn_split(parse_poly("z3^2 + z0^2", 4, QQ))


def test_build_example_one():
    s = spec("z2*z0 + z1^2", "z0", ["z0", "z1"])
    assert build_psi(s) == parse_map("[z0^2; z0*z1; z2*z0 + z1^2]")
    assert build_psi_tilde(s).is_identity()
    rep = birationality_criterion(s)
    assert rep["verdict"] == "birational"


def test_build_example_two():
    s = spec("z2*z0^2 + z1^3", "z0", ["z0^2", "z1^2"])
    assert build_psi_tilde(s) == parse_map("[z0^2; z1^2]")
    rep = birationality_criterion(s)
    assert rep["verdict"] == "not_birational"
    w = rep["witness"]
    assert w["prime"] == 7 and len(w["fiber"]) == 2


def test_gcd_precondition():
    with pytest.raises(PanError):
        spec("z0*z2 + z0^2", "z0", ["z0", "z1"])


def test_sigma_tilde_is_birational():
    s = spec("z3*z0*z1 + z2^3", "z3", ["z1*z2", "z0*z2", "z0*z1"])
    assert build_psi_tilde(s) == sigma(2)
    assert birationality_criterion(s)["verdict"] == "birational"


def test_blowdown_quadric():
    q = parse_poly("z0*z3 - z1*z2", 4, QQ)
    bd, psi = blowdown_build(q, 3, seed=1)
    assert psi.degree == 3 and bd.l == 2
    assert all(divides(q, c) for c in psi.components[:3])
    rep = contraction_check(psi, q, 7)
    assert rep["pass"] and rep["image"] == [0, 0, 0, 1]
    # P^1 x P^1 over F_7 has 8 * 8 points
    assert rep["points_on_hypersurface"] == 64


def test_blowdown_hyperplane():
    q = parse_poly("z0", 4, QQ)
    bd, psi = blowdown_build(q, 2, seed=0)
    assert psi.degree == 2
    assert contraction_check(psi, q, 7)["pass"]


def test_blowdown_errors():
    with pytest.raises(PanError):
        blowdown_build(parse_poly("z3^2 + z0^2", 4, QQ), 3)
    with pytest.raises(PanError):
        blowdown_build(parse_poly("z0*z3 - z1*z2", 4, QQ), 2)


def test_contraction_examples():
    q = parse_poly("z0", 3, QQ)
    rep = contraction_check(sigma(2), q, 5)
    assert rep["pass"] and rep["image"] == [1, 0, 0]
    assert not contraction_check(RatMap.identity(2), q, 5)["pass"]


@pytest.mark.parametrize("f,size", [
    (sigma(3), 1),
    (parse_map("[z0^2; z1^2; z2^2]"), 4),
    (RatMap.identity(2), 1),
    (RatMap.identity(3), 1),
])
def test_fiber_examples(f, size):
    assert generic_fiber_size(f, 7)["size"] == size


def test_fiber_deterministic():
    f = parse_map("[z0^2; z1^2; z2^2]")
    assert generic_fiber_size(f, [7, 11], seed=3) == generic_fiber_size(f, [7, 11], seed=3)


def test_catalog_words_have_fiber_one():
    from cremona.constructions import build
    for name, n in [("varsigma", 3), ("psi", 2), ("tame", 3), ("eta", 3)]:
        assert generic_fiber_size(build(name, n).map, [7, 11])["max"] == 1


def test_psi_chart_structure():
    # on z_n = 1 the last coordinate is P / (Q R_i) times the i-th one
    s = spec("z2*z0 + z1^2", "z0", ["z0", "z1"])
    f = build_psi(s)
    Q, P = s.Q, s.P
    for i, r in enumerate(s.R):
        lhs = f.components[-1] * (Q * r.embed(3))
        rhs = f.components[i] * P
        assert lhs == rhs


@pytest.mark.parametrize("idx,family", list(enumerate(FAMILIES)))
def test_random_specs_agree_with_oracle(idx, family):
    rng = random.Random(1000 + idx)
    for _ in range(3):
        s = random_panspec(rng, random_R(rng, family))
        rep = birationality_criterion(s)
        fib = generic_fiber_size(build_psi(s), [7, 11, 13])
        if rep["verdict"] == "birational":
            assert all(p.get("max", 1) == 1 for p in fib["primes"])
        else:
            assert rep["verdict"] == "not_birational" and fib["max"] > 1
