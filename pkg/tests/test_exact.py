from fractions import Fraction

import pytest
import sympy

from hilbertcoh.errors import FactorizationIncomplete, NotSubspace
from hilbertcoh.exact import (FMat, Poly, Subspace, charpoly, factor_over_Q, gauss_kernel,
                              kernel_f, quad_field, quotient_basis, rank_f, solve_f)


@pytest.fixture(params=[5, 13])
def F(request):
    return quad_field(request.param)


def test_units_and_omega(F):
    assert F.eps.norm() == -1
    assert F.omega * F.omega == F.omega * F.t + F.c
    assert F.unit_log(F.eps_pow(5)) == (1, 5)
    assert F.unit_log(-F.eps_pow(-3)) == (-1, -3)
    assert F.unit_log(F.elt(2)) is None


def test_coerce_and_integrality(F):
    x = F.coerce(Fraction(1, 2))
    assert not x.is_integral()
    assert F.coerce(3).is_integral()
    assert F.omega.is_integral()


def test_charpoly_zero_and_identity():
    assert charpoly([[0, 0], [0, 0]]) == Poly([0, 0, 1])
    assert charpoly([[1, 0], [0, 1]]) == Poly([1, -2, 1])


def test_factor_over_Q_multiplicities():
    x = Poly([0, 1])
    p = (x - 97280) ** 2 * (x + 840640)
    fs = factor_over_Q(p)
    assert [f for f in fs if f == x - 97280] == [x - 97280] * 2
    assert x + 840640 in fs


def test_factor_over_Q_rejects_non_monic():
    with pytest.raises(ValueError):
        factor_over_Q(Poly([1, 2]))


def test_factor_incomplete_carries_parts():
    x = Poly([0, 1])
    p = (x - 1) * (x ** 4 - 10 * x ** 2 + 1) * (x ** 3 - 2)
    with pytest.raises(FactorizationIncomplete) as info:
        factor_over_Q(p, budget=10)
    exc = info.value
    assert exc.factors == [x - 1]
    assert exc.factors[0] * exc.remainder == p
    assert sorted(f.degree() for f in factor_over_Q(p)) == [1, 3, 4]


def test_kernel_f_and_solve(F):
    w = F.sqrtD()
    M = FMat.from_rows([[F.one(), w, F.zero()], [w, F.coerce(F.D), F.one()]], F)
    K = kernel_f(M)
    assert K.ncols() == 1
    assert (M * K).is_zero()
    b = FMat.from_rows([[F.one()], [F.zero()]], F)
    x = solve_f(M, b)
    assert (M * x - b).is_zero()
    assert rank_f(M) == 2


def test_gauss_kernel_exact():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    K = gauss_kernel(rows, 3)
    assert len(K) == 2
    for v in K:
        assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)


def test_quotient_basis_trivial_cases():
    Z = Subspace([[1, 0, 1], [0, 1, 1]], 3)
    assert quotient_basis(Z, Subspace([], 3)).dim == 2
    assert quotient_basis(Z, Z).dim == 0
    with pytest.raises(NotSubspace):
        quotient_basis(Z, Subspace([[1, 0, 0]], 3))


def test_irreducible_quadratic_with_surd_roots():
    # roots -2560 +- 960 sqrt106; the product of the roots is -91136000
    p = Poly([-91136000, 5120, 1])
    assert factor_over_Q(p) == [p]
    r = sympy.roots(sympy.Poly([1, 5120, -91136000], sympy.Symbol("x")))
    assert set(r) == {-2560 + 960 * sympy.sqrt(106), -2560 - 960 * sympy.sqrt(106)}
    # a nearby constant term is irreducible too, but with other roots
    q = Poly([-91033600, 5120, 1])
    assert factor_over_Q(q) == [q]
