"""The reduction engine against the Fox oracle (a random cocycle on the free group)."""

import random

import pytest
from oracles import Fox

from hilbertcoh.errors import NotARelation
from hilbertcoh.exact import quad_field
from hilbertcoh.hecke import PLUS_PROBES, letter_elt, std_reps
from hilbertcoh.modgroup import GammaElt, T, Word, four_term_word, generators, tilde_lift
from hilbertcoh.relred import Engine, Lin, blocks_word, engine, evaluate, linexpr
from hilbertcoh.symrep import WeightPair

W = WeightPair(4, 2)
MODES = {5: ("plus", "minus"), 13: ("plus",)}


def _fox_cases():
    return [(D, m) for D in (5, 13) for m in MODES[D]]


def _unit_list(F):
    e = F.eps
    return [F.one(), e, -e, e.inverse(), -e.inverse(), e * e, -(e ** -2), e ** 3]


@pytest.mark.parametrize("D,mode", _fox_cases())
def test_torsion_words(D, mode):
    F = quad_field(D)
    fox = Fox(F, W, mode, seed=D)
    E = engine(F)
    assert fox.matches(E.phi_word(Word.parse("snsn")), Word.parse("snsn"))
    assert fox.matches(E.phi_word(Word.parse("ststst")), Word.parse("ststst"))
    assert E.phi_word(Word.parse("ss")).is_zero()


@pytest.mark.parametrize("D,mode", _fox_cases())
def test_b_unit_against_fox_and_recursion(D, mode):
    F = quad_field(D)
    E = engine(F)
    fox = Fox(F, W, mode, seed=3)
    for t in _unit_list(F):
        word = blocks_word([T(F, t), T(F, t.inverse()), T(F, t) * GammaElt((t, 0, 0, t.inverse()), F)], F)
        assert fox.matches(E.b_unit(t), word), t
        assert fox.matches(E.b_closed_form(t), word), t


@pytest.mark.parametrize("D,mode", _fox_cases())
def test_three_term_closed_form(D, mode):
    F = quad_field(D)
    E = engine(F)
    fox = Fox(F, W, mode, seed=5)
    for t in _unit_list(F):
        blocks = [T(F, t), T(F, t.inverse()), T(F, t) * GammaElt((t, 0, 0, t.inverse()), F)]
        word = blocks_word(blocks, F)
        assert fox.matches(E.three_term(*blocks), word)
        assert fox.matches(E.reduce(blocks), word)


@pytest.mark.parametrize("D,mode", _fox_cases())
def test_four_term_values(D, mode):
    F = quad_field(D)
    E = engine(F)
    fox = Fox(F, W, mode, seed=11)
    e = F.eps
    cases = [(F.one(), e * e), (F.one(), -e), (e - 1, e)] if D == 5 else [(F.elt(3), e * e)]
    for x, u in cases:
        if not ((u - 1) / x).is_integral():
            continue
        blocks = four_term_word(F, x, u)
        word = blocks_word(blocks, F)
        assert fox.matches(E.reduce(blocks), word)


@pytest.mark.parametrize("D,mode", _fox_cases())
def test_hecke_words_and_rule_order(D, mode):
    F = quad_field(D)
    varpi = F.coerce(2) if D == 5 else F.elt(4) - F.sqrtD()
    reps = std_reps(F, varpi)
    words = []
    for letters in PLUS_PROBES.values():
        elts = [letter_elt(F, x) for x in letters]
        for i in range(reps.d):
            q, word = i, None
            for g in elts:
                j = [j for j in range(reps.d) if reps.conj_elt(q, g, j) is not None][0]
                piece = tilde_lift(reps.conj_elt(q, g, j))
                word = piece if word is None else word * piece
                q = j
            words.append(word)
    fox = Fox(F, W, mode, seed=17)
    for seed in (None, 1, 2):
        E = Engine(F, rng=None if seed is None else random.Random(seed))
        for wd in words:
            assert fox.matches(E.phi_word(wd), wd)


def test_not_a_relation():
    F = quad_field(5)
    with pytest.raises(NotARelation):
        engine(F).phi_word(Word.parse("st"))


def test_lin_algebra_and_linexpr():
    F = quad_field(5)
    G = generators(F)
    a = Lin.A(F)
    b = Lin.B(F)
    s = (a + b).lmul(G.sigma)
    assert not s.is_zero()
    assert (s - s).is_zero()
    Ma, Mb = linexpr(s, W, F, "plus")
    fox = Fox(F, W, "plus", seed=1)
    A, B = fox.value(Word.parse("snsn")), fox.value(Word.parse("ststst"))
    assert Ma * A + Mb * B == evaluate(s, W, F, "plus", A, B)
