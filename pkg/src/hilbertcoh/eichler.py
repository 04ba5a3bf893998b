"""The SL(2, Z) warm-up: period ratios from the single torsion constraint.

With z0 = i*oo the Eichler cocycle has f(tau) = 0, so w = f(sigma tau) = f(sigma)
satisfies (1 + s) w = 0 and (1 + x + x^2) w = 0 for s = rho(sigma),
x = rho(sigma tau).  Moving z0 along the cusp changes w by (s - 1) b with
tau b = b.  The component of w at z^t is -i^(t+1) R(t+1), t = 0..l.
"""

from fractions import Fraction

import flint

from .errors import MultiplicityTooHigh
from .exact import from_fmpq, kernel_q, rank_q, hstack_q
from .symrep import rho_sym


def _q(M):
    n = len(M)
    return flint.fmpq_mat(n, len(M[0]), [x for row in M for x in row])


class ESSpace:
    """The kernel K, the boundary span and their parity parts for weight k."""

    def __init__(self, k):
        if k % 2 or k < 4:
            raise ValueError("weight must be even and at least 4, got %r" % (k,))
        self.k = k
        self.l = l = k - 2
        self.s = _q(rho_sym(l, ((0, 1), (-1, 0))))
        self.x = _q(rho_sym(l, ((0, 1), (-1, -1))))
        self.tau = _q(rho_sym(l, ((1, 1), (0, 1))))
        n = l + 1
        I = flint.fmpq_mat(n, n)
        for i in range(n):
            I[i, i] = 1
        self.I = I
        stacked = flint.fmpq_mat(2 * n, n, list((I + self.s).entries()) +
                                 list((I + self.x + self.x * self.x).entries()))
        self.K = kernel_q(stacked)
        self.boundary = (self.s - I) * kernel_q(self.tau - I)

    def index(self, t):
        """Row of the z^t component."""
        return self.l - t

    def parity_part(self, parity):
        """Columns of K supported on z^t with t = parity mod 2, and the matching boundary."""
        keep = [self.index(t) for t in range(self.l + 1) if t % 2 == parity]
        drop = [self.index(t) for t in range(self.l + 1) if t % 2 != parity]
        n = self.l + 1
        P = flint.fmpq_mat(len(drop), n)
        for r, i in enumerate(drop):
            P[r, i] = 1
        sub = self.K * kernel_q(P * self.K)
        bd = self.boundary
        bsub = bd * kernel_q(P * bd) if bd.ncols() else bd
        return sub, bsub, keep

    def quotient_dim(self, parity):
        sub, bsub, _ = self.parity_part(parity)
        if sub.ncols() == 0:
            return 0
        return rank_q(hstack_q([sub, bsub])) - (rank_q(bsub) if bsub.ncols() else 0)


def es_space(k):
    return ESSpace(k)


def es_ratios(k):
    """[(a, b, R(a)/R(b))] for interior a = b mod 2, b the reference of each parity."""
    E = ESSpace(k)
    l = E.l
    out = []
    for parity in (1, 0):
        d = E.quotient_dim(parity)
        if d == 0:
            continue
        if d > 1:
            raise MultiplicityTooHigh("weight %d: %d-dimensional period space" % (k, d))
        sub, bsub, _ = E.parity_part(parity)
        # a generator modulo the boundary; interior components do not see the boundary
        vec = None
        for c in range(sub.ncols()):
            v = [sub[i, c] for i in range(l + 1)]
            if bsub.ncols() == 0 or rank_q(hstack_q([bsub, _col(v)])) > rank_q(bsub):
                vec = v
                break
        interior = [t for t in range(1, l) if t % 2 == parity]
        vals = {t + 1: from_fmpq(vec[E.index(t)]) for t in interior}
        nz = [m for m in sorted(vals) if vals[m] != 0 and 2 * m >= k]
        if not nz:
            continue
        b = nz[0]
        for a in sorted(vals):
            if a == b:
                continue
            r = Fraction(vals[a]) / Fraction(vals[b])
            # w_t = -i^(t+1) R(t+1)
            if ((b - a) // 2) % 2:
                r = -r
            out.append((a, b, r))
    return out


def _col(v):
    return flint.fmpq_mat(len(v), 1, v)


def symmetric_check(k):
    """R(k-a) = (-1)^(k/2) R(a) on the computed ratios (the functional equation)."""
    sign = -1 if (k // 2) % 2 else 1
    rs = {(a, b): r for a, b, r in es_ratios(k)}
    for (a, b), r in rs.items():
        partner = k - a
        if partner == b:
            if r != sign:
                return False
        elif (partner, b) in rs and rs[(partner, b)] != sign * r:
            return False
    return True
