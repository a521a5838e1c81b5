import pytest

from cremona.constructions import (commutator_pair, g_p, h_p, minus_id, psi, psi_letters, sigma,
                                   tame_letters, tame_target, translation, varsigma, varsigma_inverse,
                                   varsigma_letters, diag)
from cremona.fields import Cyclotomic, QQ
from cremona.ratmap import RatMap, parse_map
from cremona.words import (Alphabet, GroupWord, RewriteUnsupported, WordError, alphabet_from_bindings,
                           birkhoff_check, commutator, conjugate, conjugate_product_rewrite,
                           evaluate, make_generator, parse_bindings, parse_word, reduce)


def alphabet(n, **letters):
    a = Alphabet(n, QQ, sigma_name="s")
    a.bind("s", sigma(n), sigma(n))
    for k, f in letters.items():
        a.bind(k, f)
    return a


def test_reduce_examples():
    a = alphabet(2, g=parse_map("[z0+z1; z1; z2]"))
    assert reduce(parse_word("g g^-1 s"), a) == parse_word("s")
    assert len(reduce(parse_word("s s"), a)) == 0
    assert reduce(parse_word("g s g"), a) == parse_word("g s g")


def test_evaluate_examples():
    assert evaluate(parse_word("s"), alphabet(3)) == sigma(3)
    a1, a2, a3 = varsigma_letters(3)
    assert evaluate(parse_word("a1 s a2 s a3"), alphabet(3, a1=a1, a2=a2, a3=a3)) == varsigma(3)
    g = dict(zip(["g1", "g2", "g3", "g4"], tame_letters(3)))
    w = parse_word("g1 s g2 s g3 s g2 s g4")
    assert evaluate(w, alphabet(3, **g)) == parse_map("[z0*z3 + z1^2; z1*z3; z2*z3; z3^2]")
    assert tame_target(3) == parse_map("[z0*z3 + z1^2; z1*z3; z2*z3; z3^2]")


def test_empty_word_is_identity():
    assert evaluate(parse_word("1"), alphabet(2)).is_identity()


def test_unbound_letter():
    with pytest.raises(WordError):
        evaluate(parse_word("x"), alphabet(2))


def test_commutator_translation():
    a, b = commutator_pair(3)
    assert a == parse_map("[z0; 3*z1; 3*z2; z3]")
    assert commutator(a, b) == translation(3)
    assert translation(3) == parse_map("[z0; z1+z3; z2+z3; z3]")


def test_commutator_of_self_and_of_commuting_pair():
    f = parse_map("[z0 + 2*z1; z1; z2]")
    assert commutator(f, f).is_identity()
    assert commutator(diag([1, 2, 3]), diag([5, 7, 1])).is_identity()


@pytest.mark.parametrize("n", [2, 3])
def test_psi_conjugates_minus_id_to_sigma(n):
    f = psi(n)
    assert conjugate(minus_id(n), f, f) == sigma(n)
    a1, a2 = psi_letters(n)
    assert evaluate(parse_word("a1 s a2"), alphabet(n, a1=a1, a2=a2)) == f


@pytest.mark.parametrize("n,p", [(2, 3), (3, 5)])
def test_birkhoff_examples(n, p):
    K = Cyclotomic(p)
    a = make_generator("v", varsigma(n, K), varsigma_inverse(n, K))
    rep = birkhoff_check(a, g_p(n, K), h_p(n, K), p)
    assert rep["pass"] and rep["commutator_ab_is_c"]


def test_birkhoff_fails_for_sigma():
    ident = RatMap.identity(2)
    rep = birkhoff_check(ident, ident, sigma(2), 3)
    assert not rep["pass"] and not rep["c_order_p"]


def test_rewrite_sigma():
    rw = conjugate_product_rewrite(parse_word("s"), alphabet(2))
    assert [(str(c), s) for c, s in rw.pairs] == [("", "s")]


def test_rewrite_square_diagonal_times_sigma():
    a = alphabet(2, d=diag([4, 9, 1]))
    rw = conjugate_product_rewrite(parse_word("d s"), a)
    assert len(rw.pairs) == 1
    assert evaluate(rw.as_word(), rw.alphabet) == evaluate(parse_word("d s"), a)
    conj = rw.pairs[0][0]
    assert evaluate(conj, rw.alphabet) == diag([2, 3, 1])


def test_rewrite_lone_square_diagonal():
    a = alphabet(2, d=diag([4, 1, 9]))
    rw = conjugate_product_rewrite(parse_word("d"), a)
    assert len(rw.pairs) == 2 and len(rw.pairs[1][0]) == 0
    assert evaluate(rw.as_word(), rw.alphabet) == diag([4, 1, 9])


def test_rewrite_rejects_nonsquare_without_factorization():
    a = alphabet(2, d=diag([2, 1, 1]))
    with pytest.raises(RewriteUnsupported):
        conjugate_product_rewrite(parse_word("d"), a)


def test_rewrite_with_factorization():
    # u = E diag(4, 1, 1) E^-1 with an explicit rational eigenbasis
    E = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    from cremona.ratmap import LinearMap
    u = LinearMap(E) @ LinearMap.diagonal([4, 1, 1]) @ LinearMap(E).inverse()
    a = alphabet(2)
    a.add(make_generator("u", u, factorization=[(E, (4, 1, 1))]))
    rw = conjugate_product_rewrite(parse_word("u"), a)
    assert evaluate(rw.as_word(), rw.alphabet) == u.to_ratmap()


def test_word_parse_and_inverse():
    w = parse_word("a s b^-1")
    assert str(w.inverse()) == "b s^-1 a^-1"
    with pytest.raises(WordError):
        parse_word("a^2")


def test_bindings():
    b = parse_bindings(["# letters", "a = [2*z0; z1; z2]", "", "b = [z1; z0; z2]"], QQ)
    alpha = alphabet_from_bindings(b, QQ)
    assert alpha.n == 2 and "s" in alpha
    f = evaluate(parse_word("a b a^-1"), alpha)
    assert f == parse_map("[4*z1; z0; 2*z2]")
    with pytest.raises(WordError):
        parse_bindings(["a [z0; z1]"], QQ)
