"""Symmetric tensor representations and their two-embedding tensor product.

rho_sym(l, g)[i][j] is the coefficient of u^(l-j) v^j in
(a u + b v)^(l-i) (c u + d v)^i, which makes rho_sym multiplicative.
V = Sym^l1 (x) Sym^l2 with basis e_i (x) e'_j flattened as i*(l2+1) + j
(zero based).
"""

from functools import lru_cache

import flint

from .exact import FMat, QuadElt
from .errors import SingularMatrix


class WeightPair:
    """Even l2 <= l1; k = l + 2."""

    __slots__ = ("l1", "l2")

    def __init__(self, l1, l2):
        if l1 < 0 or l2 < 0 or l1 % 2 or l2 % 2 or l2 > l1:
            raise ValueError("weights need even 0 <= l2 <= l1, got (%r, %r)" % (l1, l2))
        self.l1 = l1
        self.l2 = l2

    @classmethod
    def from_k(cls, k1, k2):
        return cls(k1 - 2, k2 - 2)

    @property
    def k1(self):
        return self.l1 + 2

    @property
    def k2(self):
        return self.l2 + 2

    @property
    def dim(self):
        return (self.l1 + 1) * (self.l2 + 1)

    def flat(self, i, j):
        """1-based (i, j) to the flat 0-based index."""
        return (i - 1) * (self.l2 + 1) + (j - 1)

    def pair(self, f):
        return f // (self.l2 + 1) + 1, f % (self.l2 + 1) + 1

    def __eq__(self, o):
        return isinstance(o, WeightPair) and (self.l1, self.l2) == (o.l1, o.l2)

    def __hash__(self):
        return hash((self.l1, self.l2))

    def __repr__(self):
        return "WeightPair(%d, %d)" % (self.l1, self.l2)


def _poly_mul(p, q):
    r = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            r[i + j] = r[i + j] + x * y
    return r


def rho_sym(l, g):
    """(l+1)x(l+1) matrix of g = ((a, b), (c, d)) on monomials u^l, ..., v^l."""
    (a, b), (c, d) = g
    one = a * 0 + 1
    # powers of the linear forms as coefficient lists in v (u-degree implied)
    P = [[one]]
    Qp = [[one]]
    for _ in range(l):
        P.append(_poly_mul(P[-1], [a, b]))
        Qp.append(_poly_mul(Qp[-1], [c, d]))
    return [_poly_mul(P[l - i], Qp[i]) for i in range(l + 1)]


def _conj(x):
    return x.conj() if isinstance(x, QuadElt) else x


def conj_matrix(g):
    return tuple(tuple(_conj(x) for x in row) for row in g)


def det2(g):
    (a, b), (c, d) = g
    return a * d - b * c


def twist_scalar(w, g, F):
    """det(g)^(-l1/2) * det(g')^(-l2/2)."""
    dt = F.coerce(det2(g))
    if dt.is_zero():
        raise SingularMatrix("singular matrix in rho_pair")
    return dt ** (-(w.l1 // 2)) * dt.conj() ** (-(w.l2 // 2))


def _kron(A, B):
    n, m = len(A), len(B)
    return [[A[i][k] * B[j][l] for k in range(n) for l in range(m)]
            for i in range(n) for j in range(m)]


def rho_pair(w, g, F, twist=True):
    """rho_l1(g) (x) rho_l2(g') as a list of rows over F (optionally twisted)."""
    g = tuple(tuple(F.coerce(x) for x in row) for row in g)
    if F.coerce(det2(g)).is_zero():
        raise SingularMatrix("singular matrix in rho_pair")
    M = _kron(rho_sym(w.l1, g), rho_sym(w.l2, conj_matrix(g)))
    if twist:
        s = twist_scalar(w, g, F)
        M = [[x * s for x in row] for row in M]
    return M


def sigma_sign_map(w):
    """rho(sigma) as a signed involution: flat index f -> (sign, image)."""
    out = []
    for f in range(w.dim):
        i, j = w.pair(f)
        s = (-1) ** (i + j)
        out.append((s, w.flat(w.l1 + 2 - i, w.l2 + 2 - j)))
    return out


# ---------------------------------------------------------------------------
# fast action on blocks of vectors

@lru_cache(maxsize=None)
def _rho_small(l, key, F):
    g = ((F.elt(*key[0]), F.elt(*key[1])), (F.elt(*key[2]), F.elt(*key[3])))
    return FMat.from_rows(rho_sym(l, g), F)


def _key(g):
    return tuple((x.a, x.b) for row in g for x in row)


def rho_small(l, g, F):
    """rho_sym(l, g) as an FMat, cached on the integral entries of g."""
    return _rho_small(l, _key(g), F)


class Action:
    """Applies rho_pair(g) (times an optional character) to n x k blocks.

    The tensor action is done as rho_l2(g') on the j index followed by
    rho_l1(g) on the i index, so no dim V x dim V matrix is ever formed.
    """

    def __init__(self, w, F):
        self.w = w
        self.F = F

    def apply(self, g, V, twist=True, scalar=None):
        w, F = self.w, self.F
        g = tuple(tuple(F.coerce(x) for x in row) for row in g)
        n1, n2 = w.l1 + 1, w.l2 + 1
        k = V.ncols()
        if k == 0:
            return V
        r1 = rho_small(w.l1, g, F)
        r2 = rho_small(w.l2, conj_matrix(g), F)
        H = FMat(_to_j_major(V.re, n1, n2, k), _to_j_major(V.om, n1, n2, k), F)
        W = r2 * H
        R = FMat(_to_i_major(W.re, n1, n2, k), _to_i_major(W.om, n1, n2, k), F)
        O = r1 * R
        out = FMat(flint.fmpq_mat(n1 * n2, k, O.re.entries()),
                   flint.fmpq_mat(n1 * n2, k, O.om.entries()), F)
        s = twist_scalar(w, g, F) if twist else F.one()
        if scalar is not None:
            s = s * scalar
        if s != 1:
            out = out.scale(s)
        return out

    def matrix(self, g, twist=True):
        """The full dim V x dim V matrix as an FMat."""
        return FMat.from_rows(rho_pair(self.w, g, self.F, twist), self.F)


def _to_j_major(M, n1, n2, k):
    # rows (i, j), cols c  ->  rows j, cols (i, c)
    e = M.entries()
    out = [None] * (n1 * n2 * k)
    for i in range(n1):
        for j in range(n2):
            src = (i * n2 + j) * k
            dst = j * n1 * k + i * k
            out[dst:dst + k] = e[src:src + k]
    return flint.fmpq_mat(n2, n1 * k, out)


def _to_i_major(M, n1, n2, k):
    # rows j, cols (i, c)  ->  rows i, cols (j, c)
    e = M.entries()
    out = [None] * (n1 * n2 * k)
    for j in range(n2):
        for i in range(n1):
            src = j * n1 * k + i * k
            dst = i * n2 * k + j * k
            out[dst:dst + k] = e[src:src + k]
    return flint.fmpq_mat(n1, n2 * k, out)
