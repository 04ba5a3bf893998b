import pytest

from hilbertcoh import pcohom
from hilbertcoh.exact import quad_field
from hilbertcoh.symrep import WeightPair

FIELDS = [quad_field(5), quad_field(13)]


@pytest.mark.parametrize("F", FIELDS, ids=["D5", "D13"])
def test_conjugation_relations(F):
    assert pcohom.USetup(F, WeightPair(4, 2)).check_conjugation()


@pytest.mark.parametrize("F", FIELDS, ids=["D5", "D13"])
@pytest.mark.parametrize("l", [(0, 0), (2, 0), (4, 2), (6, 6)])
def test_dims_U(F, l):
    w = WeightPair(*l)
    d = pcohom.dims_U(F, w)
    assert d["dim_VU"] == 1 and d["fixed_u1"] == w.l2 + 1 and d["dim_H1_U"] == 2
    assert d["dim_B"] == w.dim - 1


@pytest.mark.parametrize("F", FIELDS, ids=["D5", "D13"])
def test_t_eigenvalues(F):
    w = WeightPair(4, 2)
    lam = pcohom.t_eigenvalues(F, w)
    e, ec = F.eps, F.eps.conj()
    assert set(lam) == {e ** 6 * ec ** -2, e ** -6 * ec ** 2}


@pytest.mark.parametrize("F", FIELDS, ids=["D5", "D13"])
def test_p_dims_closed_form(F):
    # H^i(P, V) is one-dimensional exactly when l1 = l2 (N(eps)^l1 = 1 since l1 is even)
    assert pcohom.p_dims(F, WeightPair(2, 2)) == (1, 1)
    assert pcohom.p_dims(F, WeightPair(4, 2)) == (0, 0)


def test_suite_rows():
    rows = pcohom.suite(FIELDS[0], 4)
    assert rows and all(ok for _, _, ok, _ in rows)
