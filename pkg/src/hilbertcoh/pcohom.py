"""Cohomology of the lower-triangular parabolic P and its unipotent part U.

Everything here is computed from scratch on V, in the convention
u1 = [[1, 0], [1, 1]], u2 = [[1, 0], [omega, 1]], t = diag(eps^-1, eps).
A 1-cocycle on U is the pair (f(u1), f(u2)) with (u1 - 1) f(u2) = (u2 - 1) f(u1).
The upper-triangular statements used elsewhere follow by transpose-inverse.
"""

from .errors import AssertionFailed
from .exact import FMat, kernel_f, rank_f, solve_f
from .symrep import Action, WeightPair


def _lower(F, c):
    return ((F.one(), F.zero()), (F.coerce(c), F.one()))


class USetup:
    """rho(u1), rho(u2), rho(t) and the spaces Z = Z^1(U, V), B = B^1(U, V)."""

    def __init__(self, F, w):
        self.F, self.w = F, w
        act = Action(w, F)
        e = F.eps
        self.u1 = act.matrix(_lower(F, 1), twist=False)
        self.u2 = act.matrix(_lower(F, F.omega), twist=False)
        self.t = act.matrix(((e.inverse(), F.zero()), (F.zero(), e)), twist=False)
        self.tinv = act.matrix(((e, F.zero()), (F.zero(), e.inverse())), twist=False)
        self.u1inv = act.matrix(_lower(F, -1), twist=False)
        self.u2inv = act.matrix(_lower(F, -F.omega), twist=False)
        n = w.dim
        self.I = FMat.identity(n, F)
        self._Z = None
        self._B = None

    def unit(self, i):
        n = self.w.dim
        return FMat.from_cols([[self.F.one() if k == i else self.F.zero() for k in range(n)]],
                              self.F, n)

    @property
    def Z(self):
        """Basis of {(U1, U2)} stacked as 2n-vectors."""
        if self._Z is None:
            M = FMat.hstack([self.u2 - self.I, -(self.u1 - self.I)])
            self._Z = kernel_f(M)
        return self._Z

    @property
    def B(self):
        if self._B is None:
            self._B = FMat.vstack([self.u1 - self.I, self.u2 - self.I])
        return self._B

    def check_conjugation(self):
        """t u1 t^-1 = u1^A u2^B and t u2 t^-1 = u1^C u2^D_rel as matrices."""
        F = self.F
        lhs1 = self.t * self.u1 * self.tinv
        lhs2 = self.t * self.u2 * self.tinv
        rhs1 = self.power(1, F.A) * self.power(2, F.B)
        rhs2 = self.power(1, F.C) * self.power(2, F.D_rel)
        return lhs1 == rhs1 and lhs2 == rhs2

    def power(self, i, k):
        u = self.u1 if i == 1 else self.u2
        if k < 0:
            u = self.u1inv if i == 1 else self.u2inv
            k = -k
        out = self.I
        for _ in range(k):
            out = out * u
        return out

    def cocycle_power(self, i, k, v):
        """f(u_i^k) from f(u_i) = v."""
        n = self.w.dim
        out = FMat.zeros(n, v.ncols(), self.F)
        if k > 0:
            acc = v
            u = self.u1 if i == 1 else self.u2
            for _ in range(k):
                out = out + acc
                acc = u * acc
        elif k < 0:
            ui = self.u1inv if i == 1 else self.u2inv
            acc = ui * v
            for _ in range(-k):
                out = out - acc
                acc = ui * acc
        return out

    def t_action(self, U1, U2):
        """(f'(u1), f'(u2)) for f' = t.f, f'(n) = t^-1 f(t n t^-1)."""
        F = self.F

        def f_word(a, b):
            return self.cocycle_power(1, a, U1) + self.power(1, a) * self.cocycle_power(2, b, U2)

        return self.tinv * f_word(F.A, F.B), self.tinv * f_word(F.C, F.D_rel)


def _check(cond, what):
    if not cond:
        raise AssertionFailed(what)


def dims_U(F, w):
    """The dimension statements for V^U, fixed spaces, W and H^1(U, V)."""
    S = USetup(F, w)
    n = w.dim
    fixed = kernel_f(FMat.vstack([S.u1 - S.I, S.u2 - S.I]))
    _check(fixed.ncols() == 1, "dim V^U = 1")
    last = S.unit(n - 1)
    _check(solve_f(fixed, last) is not None, "V^U spanned by e_(l1+1) (x) e'_(l2+1)")
    fix1 = kernel_f(S.u1 - S.I).ncols()
    fix2 = kernel_f(S.u2 - S.I).ncols()
    _check(fix1 == w.l2 + 1 and fix2 == w.l2 + 1, "fixed space of u has dim l2+1")
    W = FMat.hstack([S.u1 - S.I, S.u2 - S.I])
    dimW = rank_f(W)
    _check(dimW == n - 1, "dim(Im(u1-1) + Im(u2-1)) = dim V - 1")
    _check(solve_f(W, S.unit(0)) is None, "e_1 (x) e'_1 not in W")
    dimZ = S.Z.ncols()
    dimB = rank_f(S.B)
    _check(dimB == n - 1, "dim B^1(U, V) = dim V - 1")
    h1 = dimZ - dimB
    _check(h1 == 2, "dim H^1(U, V) = 2")
    return {"dim_V": n, "dim_VU": fixed.ncols(), "fixed_u1": fix1, "fixed_u2": fix2,
            "dim_W": dimW, "dim_Z": dimZ, "dim_B": dimB, "dim_H1_U": h1}


def _partial_solution(S, rhs, support, fixed_index, fixed_value):
    """v supported on `support` with v[fixed_index] = fixed_value and (u1 - 1) v = rhs."""
    F = S.F
    n = S.w.dim
    free = [k for k in support if k != fixed_index]
    M = (S.u1 - S.I).cols(free)
    R = rhs - (S.u1 - S.I) * S.unit(fixed_index).scale(fixed_value)
    x = solve_f(M, R) if free else (None if not R.is_zero() else FMat.zeros(0, 1, F))
    if x is None:
        raise AssertionFailed("the successive solution for the cocycle does not exist")
    v = [F.zero()] * n
    v[fixed_index] = fixed_value
    for k, val in zip(free, (r[0] for r in x.to_rows())):
        v[k] = val
    return FMat.from_cols([v], F, n)


def basis_cocycles(S):
    """f1 = (t1, t2) and f2 = (t3, t4) as stacked 2n-columns."""
    F, w = S.F, S.w
    n = w.dim
    i1 = w.flat(1, w.l2 + 1)
    t1 = S.unit(i1)
    supp1 = [w.flat(i, w.l2 + 1) for i in range(1, w.l1 + 2)]
    t2 = _partial_solution(S, (S.u2 - S.I) * t1, supp1, i1, F.omega)
    i3 = w.flat(w.l1 + 1, 1)
    t3 = S.unit(i3)
    supp3 = [w.flat(w.l1 + 1, j) for j in range(1, w.l2 + 2)]
    t4 = _partial_solution(S, (S.u2 - S.I) * t3, supp3, i3, F.omega.conj())
    for a, b in ((t1, t2), (t3, t4)):
        _check(((S.u2 - S.I) * a - (S.u1 - S.I) * b).is_zero(), "cocycle condition")
    del n
    return FMat.vstack([t1, t2]), FMat.vstack([t3, t4])


def t_matrix(F, w):
    """Matrix of t on H^1(U, V) in the basis of the classes of f1, f2."""
    S = USetup(F, w)
    _check(S.check_conjugation(), "t u t^-1 relations")
    f1, f2 = basis_cocycles(S)
    n = w.dim
    Bb = S.B
    base = FMat.hstack([f1, f2, Bb])
    # f1, f2 independent modulo B
    _check(rank_f(base) == rank_f(Bb) + 2, "f1, f2 independent modulo B^1")
    cols = []
    for f in (f1, f2):
        U1, U2 = f.rows(list(range(n))), f.rows(list(range(n, 2 * n)))
        V1, V2 = S.t_action(U1, U2)
        img = FMat.vstack([V1, V2])
        c = solve_f(base, img)
        _check(c is not None, "t f lies in span(f1, f2) + B^1")
        cols.append([r[0] for r in c.rows([0, 1]).to_rows()])
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


def expected_t_eigenvalues(F, w):
    e = F.eps
    ec = e.conj()
    return (e ** (w.l1 + 2) * ec ** (-w.l2), e ** (-w.l1 - 2) * ec ** w.l2)


def t_eigenvalues(F, w):
    """The eigenvalues of t on H^1(U, V) (asserted to match the closed forms)."""
    M = t_matrix(F, w)
    lam = expected_t_eigenvalues(F, w)
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    _check(tr == lam[0] + lam[1] and det == lam[0] * lam[1], "t eigenvalues match the closed forms")
    if w.l2 > 0:
        # the coefficient comparison behind the diagonal form needs l2 > 0
        _check(M[0][1].is_zero() and M[1][0].is_zero(), "t is diagonal on (f1, f2)")
    _check(all(x != 1 for x in lam), "H^1(U, V)^(P/U) = 0")
    return lam


def h2_scalar(F, w):
    """The coefficient c with rho(t)^-1 (e1 (x) e'1) = c e1 (x) e'1 mod W, checked."""
    S = USetup(F, w)
    v = S.tinv * S.unit(0)
    c = v.entry(0, 0)
    W = FMat.hstack([S.u1 - S.I, S.u2 - S.I])
    rest = v - S.unit(0).scale(c)
    _check(rest.is_zero() or solve_f(W, rest) is not None, "t-scalar residue lies in W")
    exp = F.eps ** w.l1 * F.eps.conj() ** w.l2
    _check(c == exp, "t acts on H^2(U, V) by eps^l1 eps'^l2")
    return c


def p_dims(F, w):
    """(dim H^1(P, V), dim H^2(P, V)) from the computed pieces, checked against the closed forms."""
    S = USetup(F, w)
    n = w.dim
    f = S.unit(n - 1)
    tf = S.t * f
    lam = tf.entry(n - 1, 0)
    _check((tf - f.scale(lam)).is_zero(), "t preserves V^U")
    h1_quot = 1 if lam == 1 else 0
    if w.l1 > 0 or w.l2 > 0:
        t_eigenvalues(F, w)
    h1 = h1_quot
    s = h2_scalar(F, w)
    h2 = 1 if s == 1 else 0
    normeps = F.eps.norm()
    closed = 1 if (w.l1 == w.l2 and normeps ** w.l1 == 1) else 0
    _check(h1 == closed, "dim H^1(P, V) closed form")
    _check(h2 == closed, "dim H^2(P, V) closed form")
    return h1, h2


def suite(F, max_l):
    """Run every check for even 0 <= l2 <= l1 <= max_l; rows of (weights, name, ok, detail)."""
    rows = []
    for l1 in range(0, max_l + 1, 2):
        for l2 in range(0, l1 + 1, 2):
            w = WeightPair(l1, l2)
            for name, fn in (("dims_U", dims_U), ("t_eigenvalues", t_eigenvalues),
                             ("h2_scalar", h2_scalar), ("p_dims", p_dims)):
                try:
                    out = fn(F, w)
                    rows.append((w, name, True, out))
                except AssertionFailed as exc:
                    rows.append((w, name, False, str(exc)))
    return rows
