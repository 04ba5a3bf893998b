import pytest

from hilbertcoh.errors import LetterAlphabetViolation, NotPrime
from hilbertcoh.exact import quad_field
from hilbertcoh.hecke import perm_of, psi_triple, psi_word, residues_mod, std_reps
from hilbertcoh.modgroup import generators
from hilbertcoh.symrep import WeightPair

F5 = quad_field(5)
F13 = quad_field(13)


def test_residue_counts():
    assert len(residues_mod(F5, F5.coerce(2))) == 4
    assert len(residues_mod(F13, F13.elt(4) - F13.sqrtD())) == 3
    # smallest representatives come first
    assert residues_mod(F13, F13.elt(4) - F13.sqrtD())[0] == F13.zero()


def test_std_reps_degree():
    assert std_reps(F5, 2).d == 5
    assert std_reps(F13, F13.elt(4) - F13.sqrtD()).d == 4
    assert std_reps(F5, None).d == 1


@pytest.mark.parametrize("bad", [6, 1, -2])
def test_not_prime(bad):
    with pytest.raises(NotPrime):
        std_reps(F5, bad)


def test_conjugation_permutes_cosets():
    reps = std_reps(F5, 2)
    G = generators(F5)
    for g in (G.sigma, G.tau, G.nu):
        q = perm_of(g, reps)
        assert sorted(q) == list(range(reps.d))


def test_alphabet_checks():
    reps = std_reps(F5, 2)
    with pytest.raises(LetterAlphabetViolation):
        psi_word(F5, ("s", "n", "s", "n"), reps, "minus")
    with pytest.raises(LetterAlphabetViolation):
        psi_word(F5, ("s", "t"), reps, "plus")


def test_identity_operator_is_trivial():
    # T(1) = identity: psi equals phi on the probes
    w = WeightPair(4, 2)
    reps = std_reps(F5, None)
    cC, cA, cB = psi_triple(F5, w, reps)
    assert len(cC) == 0
    assert len(cA) == 1 and len(cB) == 1


def test_jobs_give_identical_combos():
    w = WeightPair(8, 4)
    reps = std_reps(F5, 2)
    a = psi_triple(F5, w, reps, "minus", jobs=1)
    b = psi_triple(F5, w, reps, "minus", jobs=3)
    for x, y in zip(a, b):
        assert set(x.terms) == set(y.terms)
        for k in x.terms:
            assert x.terms[k][1:] == y.terms[k][1:]
