import pytest

from cremona.constructions import (REGISTRY, ConstructionError, build, eta, h_n, psi, sigma,
                                   verify_identity, verify_suite, varsigma, diag, minus_id)
from cremona.ratmap import compose, parse_map


def test_build_examples():
    s = build("sigma", 3)
    assert s.map == parse_map("[z1*z2*z3; z0*z2*z3; z0*z1*z3; z0*z1*z2]") and s.degree == 3
    v = build("varsigma", 4)
    assert v.map == parse_map("[z0*z3; z1*z3; z2*z3; z3*z4; z4^2]") and v.degree == 2
    t = build("tau", 3, i=0)
    assert t.map == parse_map("[z2; z1; z0; z3]")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_degrees(n):
    assert sigma(n).degree == n
    assert varsigma(n).degree == 2
    assert eta(n).degree == 2
    assert h_n(n).degree == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_involutions(n):
    for f in (psi(n), eta(n), sigma(n), diag([1, -1] + [1] * (n - 1)), minus_id(n)):
        assert compose(f, f).is_identity()


def test_minus_id_shape():
    assert minus_id(2) == parse_map("[z0; z1; -z2]")


def test_verify_identity_examples():
    assert verify_identity("sigma_involution", 4)["pass"]
    assert verify_identity("varsigma_decomposition", 3)["pass"]
    assert verify_identity("hn_sigma_order_three", 2)["pass"]


def test_verify_suite_examples():
    reps = verify_suite([2, 3])
    assert reps and all(r["pass"] for r in reps)
    assert all("millis" in r for r in reps)
    assert verify_suite([]) == []


def test_verify_suite_n5():
    reps = verify_suite([5], checks=[c for c in REGISTRY if c != "psi_decomposition_and_conjugacy"])
    assert reps and all(r["pass"] for r in reps)


def test_errors():
    with pytest.raises(ConstructionError):
        build("nope", 2)
    with pytest.raises(ConstructionError):
        build("tame", 2)
    with pytest.raises(ConstructionError):
        build("sigma", 1)
    with pytest.raises(ConstructionError):
        verify_identity("nope", 2)


def test_decompositions_evaluate_to_maps():
    from cremona.words import evaluate
    for name, n in [("varsigma", 3), ("psi", 2), ("tame", 3), ("translation", 3)]:
        c = build(name, n)
        assert evaluate(c.decomposition, c.alphabet) == c.map
