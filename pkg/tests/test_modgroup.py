import pytest

from hilbertcoh.errors import NotParabolic
from hilbertcoh.exact import quad_field
from hilbertcoh.modgroup import (GammaElt, PREFERENCE_RULES, Word, coset_rep, four_term_word,
                                 generators, p_decompose, p_word, tilde_lift, verify_relations)
from hilbertcoh.relred import _eval_blocks


@pytest.fixture(params=[5, 13])
def F(request):
    return quad_field(request.param)


def test_relations_hold(F):
    rep = verify_relations(F)
    assert rep and all(ok for _, ok in rep)


def test_word_free_reduction_and_inverse():
    w = Word.parse("snNt")
    assert w == Word.parse("st")
    assert (w * w.inv()) == Word()
    assert repr(Word()) == "1"


def test_word_macros_evaluate(F):
    G = generators(F)
    assert Word.parse("m").evaluate(F) == G.mu
    assert Word.parse("e").evaluate(F) == G.eta


def test_gamma_canonical_form(F):
    e = F.eps
    g = GammaElt((e, 0, 0, e), F)
    assert g.is_identity()
    assert GammaElt((-1, 0, 0, -1), F).is_identity()
    assert generators(F).nu.chi() == -1
    assert generators(F).sigma.chi() == 1


def test_p_word_roundtrip(F):
    e = F.eps
    for k in range(-3, 4):
        for a, b in ((0, 0), (1, 0), (2, -1), (-1, 3)):
            p = GammaElt((e ** k, F.elt(a, b) * e ** k, 0, 1), F)
            assert p_word(p).evaluate(F) == p


def test_p_decompose_rejects_non_parabolic(F):
    with pytest.raises(NotParabolic):
        p_decompose(generators(F).sigma)


def test_coset_rep_cases(F):
    G = generators(F)
    assert coset_rep(G.tau).case == 1
    assert coset_rep(G.sigma).case == 2
    g = GammaElt((1, 0, F.elt(2), 1), F)
    rc = coset_rep(g)
    assert rc.case == 3
    assert rc.lift.evaluate(F) == rc.rep
    assert len(PREFERENCE_RULES) == 5


def test_tilde_lift_deterministic(F):
    g = GammaElt((1, 0, F.elt(3, 1), 1), F) * generators(F).nu
    assert tilde_lift(g) == tilde_lift(g)
    assert tilde_lift(g).evaluate(F) == g


def test_four_term_words(F):
    e = F.eps
    for x, u in ((F.one(), e * e), (F.one() + F.one(), -e), (e - 1, e)):
        if not ((u - 1) / x).is_integral():
            continue
        assert _eval_blocks(F, four_term_word(F, x, u)).is_identity()
