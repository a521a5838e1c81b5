import random
from fractions import Fraction

import pytest

from cremona.freeness import (FreenessError, certify_free_product, certify_free_subgroup,
                              evaluate_word_matrix, expand_subgroup_word, free_reduce,
                              identity_matrix, on_locus, parse_free_word, pencil_action_matches,
                              representation_matrices, word_matrix)
from cremona.poly import HomPoly


def mat(k, text):
    return evaluate_word_matrix(parse_free_word(text), representation_matrices(k), k)


def test_alphabet_shape():
    A = representation_matrices(0)
    s = A[("s", 1)]
    assert s.a.is_zero() and s.d.is_zero() and s.b == s.c
    g = A[("g0", 1)]
    assert [p.degree for p in g.entries] == [1, 1, 1, 1]
    assert A[("g0", -1)].entries == (g.d, -g.b, -g.c, g.a)


def test_letter_products():
    g = representation_matrices(0)[("g0", 1)]
    assert mat(0, "g0") == g
    gs = mat(0, "g0 s")
    assert gs.entries == (g.b, g.a, g.d, g.c)
    assert mat(0, "s s") == identity_matrix(0)
    gg = mat(0, "g0 g0^-1")
    assert gg.is_scalar() and gg.a == g.det()


def test_unbound_letter():
    with pytest.raises(FreenessError):
        evaluate_word_matrix(parse_free_word("g3"), representation_matrices(0), 0)


def test_small_certificates():
    r = certify_free_product(2, 0)
    # three letters, each followed by one of two non-cancelling letters
    assert r["pass"] and r["words"] == 3 + 3 * 2
    r = certify_free_product(6, 0)
    assert r["pass"] and r["complete"]
    assert certify_free_subgroup(3, 1)["pass"]
    assert certify_free_subgroup(4, 0)["pass"]


def test_special_word_on_locus():
    m = word_matrix("g0 s g0^-1 s")
    assert not m.is_scalar()
    a, b, c, d = m.at([1, 0, 0, 1])
    assert b == c == 0 and a == d
    assert on_locus(m, [1, 0, 0, 1])
    assert not on_locus(m, [1, 2, 3, 5])


def test_subgroup_reduction_excludes_cancelling_words():
    r = certify_free_subgroup(2, 0)
    words = {e["word"] for e in r["entries"]}
    assert "h0 h0^-1" not in words and "h0^-1 h0" not in words
    assert r["words"] == 2 + 2
    assert certify_free_subgroup(2, 1)["words"] == 4 + 4 * 3


def test_expand_subgroup_word():
    w = expand_subgroup_word(parse_free_word("h0 h1^-1"))
    assert w == parse_free_word("g0 s s g1^-1")
    assert free_reduce(w) == parse_free_word("g0 g1^-1")


def test_budget_reports_partial_coverage():
    r = certify_free_product(6, 0, max_words=10)
    assert not r["complete"] and not r["pass"] and r["words"] == 10


def test_empty_word_never_certified():
    r = certify_free_product(3, 1)
    assert all(e["length"] >= 1 for e in r["entries"])
    assert evaluate_word_matrix((), representation_matrices(1), 1).is_scalar()


def _random_word(rng, k, length):
    letters = [("s", 1)] + [(f"g{i}", e) for i in range(k + 1) for e in (1, -1)]
    return tuple(rng.choice(letters) for _ in range(length))


def _proj_equal(m1, m2):
    e1, e2 = m1.entries, m2.entries
    return all((x * y2 - y * x2).is_zero() for x, y in zip(e1, e2) for x2, y2 in [(e1[0], e2[0])]) \
        and all((e1[i] * e2[j] - e1[j] * e2[i]).is_zero() for i in range(4) for j in range(4))


def test_reduction_is_projectively_invisible():
    rng = random.Random(5)
    A = representation_matrices(1)
    for _ in range(40):
        w = _random_word(rng, 1, rng.randint(0, 7))
        assert _proj_equal(evaluate_word_matrix(w, A, 1), evaluate_word_matrix(free_reduce(w), A, 1))


def test_determinant_multiplicativity():
    rng = random.Random(6)
    A = representation_matrices(1)
    dets = [A[(f"g{i}", 1)].det() for i in range(2)]
    for _ in range(30):
        w = _random_word(rng, 1, rng.randint(1, 6))
        expect = HomPoly.const(dets[0].field, dets[0].nvars, (-1) ** sum(g == "s" for g, _ in w))
        for g, _ in w:
            if g != "s":
                expect = expect * dets[int(g[1:])]
        assert evaluate_word_matrix(w, A, 1).det() == expect


def test_substitution_consistency():
    rng = random.Random(7)
    r = certify_free_product(4, 1)
    A = representation_matrices(1)
    for e in r["entries"][::7]:
        m = evaluate_word_matrix(parse_free_word(e["word"]), A, 1)
        vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(8)]
        if on_locus(m, vals):
            continue
        a, b, c, d = m.at(vals)
        assert not (b == 0 and c == 0 and a == d)


def test_matrix_matches_projective_composition():
    params = {0: (1, 2, 3, 5), 1: (2, -1, 1, 4)}
    samples = [(1, 2, 3, 4), (3, 7, 1, 2), (-2, 5, 1, 1)]
    for text in ["g0", "g0 s", "g0 s g1^-1 s g0", "s g1 g1 s g0^-1"]:
        assert pencil_action_matches(parse_free_word(text), params, 3, samples)
