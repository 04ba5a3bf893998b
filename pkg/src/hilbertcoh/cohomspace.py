"""Constraint spaces Z_A, coboundary spaces B_A, Hecke matrices and ratio reports.

Both parts are handled uniformly: the minus part is the plus part for the
module V twisted by chi(g) = (-1)^n, det g = eps^n.  In particular nu acts
as -rho'(nu) there, and sigma nu, delta, sigma tau are untouched or flip as
chi dictates.

Coboundaries.  A cochain h on the free group with h(sigma~) = S,
h(tau~) = T, h(nu~) = U vanishing on the parabolic relations is, up to a
coboundary, of the form T = 0, U = lambda f with f the U-fixed vector
e_(l1+1) (x) e'_(l2+1) (only when nu fixes f; otherwise lambda = 0).  Killing
C = phi(sigma~^2) forces (1 + sigma) S = 0 and killing B forces
(1 + x + x^2) S = 0 with x = sigma tau.  Hence

    B_A = (1 + delta)/2 (1 + sigma nu) span(W u {sigma f}),
    W = ker(1 + sigma) n ker(1 + x + x^2).
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import flint

from .errors import (FactorizationIncomplete, NormalizationInfeasible, SubspaceViolation, TorsionCheckFailed,
                     UnsupportedConfiguration, ZeroDivisorPivot)
from .exact import (ExtElt, FMat, Poly, QuadElt, charpoly, factor_over_Q, gauss_kernel,
                    hstack_q, independent_cols_f, kernel_f, kernel_q, solve_f, solve_q, vstack_q)
from .hecke import Combo, psi_triple, std_reps
from .modgroup import GammaElt, PREFERENCE_RULES, T, generators
from .relred import engine
from .symrep import Action


# ---------------------------------------------------------------------------
# torsion probe

class TorsionProbe:
    """x = sigma p1 sigma p2 of order 3 and the blocks of x~^3."""

    def __init__(self, F, x, blocks):
        self.F = F
        self.x = x
        self.blocks = blocks

    def __repr__(self):
        return "TorsionProbe(x=%r)" % (self.x,)


def torsion_probe(F):
    e = F.eps
    ei = e.inverse()
    if F.D == 5:
        p1 = GammaElt((ei, -2, 0, e), F)
        p2 = T(F, -ei)
    elif F.D == 13:
        p1 = GammaElt((ei, 2 * e - 7, 0, e), F)
        p2 = T(F, -2 * e)
    else:
        raise UnsupportedConfiguration("no torsion probe for D=%d" % F.D)
    s = generators(F).sigma
    x = s * p1 * s * p2
    if not (x * x * x).is_identity() or x.is_identity():
        raise TorsionCheckFailed("x does not have order 3")
    return TorsionProbe(F, x, [p1, p2] * 3)


# ---------------------------------------------------------------------------
# small helpers

def _chi(g, mode):
    return g.chi() if mode == "minus" else 1


def act(w, F, g, V, mode="plus"):
    """chi(g) rho'(g) V for g in Gamma* (or delta)."""
    s = _chi(g, mode)
    return Action(w, F).apply(g.rows(), V, twist=True, scalar=None if s == 1 else s)


def act_matrix_q(w, F, g):
    """rho'(g) for rational g (entries in Z) as an fmpq_mat."""
    M = Action(w, F).apply(g.rows(), FMat.identity(w.dim, F), twist=True)
    if not M.is_rational():
        raise AssertionError("expected a rational action")
    return M.re


def column_basis_f(M):
    return M.cols(independent_cols_f(M))


# ---------------------------------------------------------------------------
# the spaces

def _check_mode(F, mode):
    if mode not in ("plus", "minus"):
        raise UnsupportedConfiguration("part must be plus or minus")
    if mode == "minus" and F.D != 5:
        raise UnsupportedConfiguration("the minus part is implemented for D=5 only")


def z0_basis(F, w, mode):
    """Basis of {v : chi(sigma nu) sigma nu v = v, delta v = v} (monomial structure)."""
    G = generators(F)
    n = w.dim
    I = FMat.identity(n, F)
    P = act(w, F, G.sigma * G.nu, I, mode)
    Dl = act(w, F, G.delta, I, mode)
    Pr = P.to_rows()
    Dr = Dl.to_rows()
    cols = []
    seen = set()
    for f in range(n):
        if f in seen:
            continue
        nz = [r for r in range(n) if not Pr[r][f].is_zero()]
        if len(nz) != 1:
            raise AssertionError("sigma nu is not monomial")
        g = nz[0]
        c = Pr[g][f]
        seen.add(f)
        seen.add(g)
        if Dr[f][f] != 1 or Dr[g][g] != 1:
            continue
        v = [F.zero()] * n
        if g == f:
            if c != 1:
                continue
            v[f] = F.one()
        else:
            v[f] = F.one()
            v[g] = c
        cols.append(v)
    Z0 = FMat.from_cols(cols, F, n)
    if not (act(w, F, G.sigma * G.nu, Z0, mode) - Z0).is_zero() or \
            not (act(w, F, G.delta, Z0, mode) - Z0).is_zero():
        raise AssertionError("Z0 basis check failed")
    return Z0


def torsion_lin(F):
    return engine(F).reduce(torsion_probe(F).blocks)


def torsion_constraint(F, w, mode, A):
    """(x - 1) M_A(Z3) A for a block A of candidate vectors."""
    pr = torsion_probe(F)
    lin = torsion_lin(F)
    co = Combo(F).add_lin(lin, w, mode=mode)
    Z3 = co.evaluate(w, A)
    return act(w, F, pr.x, Z3, mode) - Z3


def assemble_Z(F, w, mode="plus"):
    """Basis (n x z FMat) of Z_A for the part."""
    _check_mode(F, mode)
    Z0 = z0_basis(F, w, mode)
    if Z0.ncols() == 0:
        return Z0
    K = torsion_constraint(F, w, mode, Z0)
    C = kernel_f(K)
    return Z0 * C


def sigma_f_vector(F, w, mode):
    """sigma f if f = e_(l1+1) (x) e'_(l2+1) is fixed by chi(nu) nu, else None."""
    G = generators(F)
    n = w.dim
    f = FMat.from_cols([[F.one() if i == n - 1 else F.zero() for i in range(n)]], F, n)
    if not (act(w, F, G.nu, f, mode) - f).is_zero():
        return None
    return act(w, F, G.sigma, f, mode)


def w_space(F, w):
    """W = ker(1 + sigma) n ker(1 + x + x^2), x = sigma tau, over Q."""
    G = generators(F)
    n = w.dim
    s = act_matrix_q(w, F, G.sigma)
    x = act_matrix_q(w, F, G.sigma * G.tau)
    I = flint.fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    # ker(1 + sigma) = image(1 - sigma); take independent columns of 1 - sigma
    Y = _col_basis_q(I - s)
    N = (I + x + x * x) * Y
    K = kernel_q(N)
    return Y * K


def _col_basis_q(M):
    K = kernel_q(M)
    k = M.ncols()
    free = set()
    e = K.entries()
    kc = K.ncols()
    for c in range(kc):
        for r in range(k - 1, -1, -1):
            if e[r * kc + c] != 0:
                free.add(r)
                break
    keep = [j for j in range(k) if j not in free]
    return flint.fmpq_mat(M.nrows(), len(keep), [M[i, j] for i in range(M.nrows()) for j in keep])


def assemble_B(F, w, mode="plus", Z=None):
    """Basis of B_A; checks B_A within Z_A when Z is given."""
    _check_mode(F, mode)
    G = generators(F)
    Wq = w_space(F, w)
    gens = FMat.rational(Wq, F)
    sf = sigma_f_vector(F, w, mode)
    if sf is not None:
        gens = FMat.hstack([gens, sf])
    if gens.ncols() == 0:
        return gens
    L = gens + act(w, F, G.sigma * G.nu, gens, mode)
    L = (L + act(w, F, G.delta, L, mode)).scale(Fraction(1, 2))
    B = column_basis_f(L)
    if Z is not None and B.ncols():
        if solve_f(Z, B) is None:
            raise SubspaceViolation("B_A is not contained in Z_A for %r" % (w,))
    return B


# dim S_(k1,k2) where it is known, keyed by (k1, k2)
DIM_TABLE = {
    5: {(10, 6): 1, (14, 6): 1, (8, 8): 1, (12, 8): 1, (12, 10): 1, (14, 10): 2, (10, 8): 1,
        (20, 20): 7},
    13: {(8, 8): 5, (10, 10): 7, (12, 12): 11},
}


def verify_fact_zeroing(F, w, mode="plus"):
    """Every admissible B-value is realized by a coboundary of the allowed kind."""
    G = generators(F)
    n = w.dim
    s = act_matrix_q(w, F, G.sigma)
    t = act_matrix_q(w, F, G.tau)
    d = act_matrix_q(w, F, G.delta)
    I = flint.fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    x = s * t
    # admissible B: (sigma tau - 1) B = 0, (delta tau + 1) B = 0
    R = kernel_q(vstack_q([x - I, d * t + I]))
    # realizable: (1 + x + x^2) S, S in ker(1 + sigma), delta S = S
    S = _col_basis_q((I + d) * (I - s))
    Y = (I + x + x * x) * S
    if R.ncols() == 0:
        return True
    rY = n - kernel_q(Y.transpose()).ncols() if Y.ncols() else 0
    rYR = n - kernel_q(hstack_q([Y, R]).transpose()).ncols()
    return rY == rYR


# ---------------------------------------------------------------------------
# the quotient and the Hecke action

class ClassSpace:
    """Z_A, B_A and a quotient basis, with coordinates."""

    def __init__(self, F, w, mode="plus"):
        _check_mode(F, mode)
        self.F, self.w, self.mode = F, w, mode
        self.Z = assemble_Z(F, w, mode)
        self.B = assemble_B(F, w, mode, self.Z)
        z, b = self.Z.ncols(), self.B.ncols()
        self.Bc = solve_f(self.Z, self.B) if b else FMat.zeros(z, 0, F)
        I = FMat.identity(z, F)
        P = FMat.hstack([self.Bc, I])
        idx = independent_cols_f(P)
        if idx[:b] != list(range(b)):
            raise AssertionError("B_A basis is dependent")
        self.qidx = [j - b for j in idx[b:]]
        self.P = P.cols(idx)
        self.Q = self.Z.cols(self.qidx)

    @property
    def dims(self):
        return {"Z": self.Z.ncols(), "B": self.B.ncols(), "quotient": len(self.qidx)}

    def coords(self, V):
        """Quotient coordinates of vectors of Z_A (columns of V)."""
        c = solve_f(self.Z, V)
        if c is None:
            raise SubspaceViolation("vector not in Z_A")
        y = solve_f(self.P, c)
        return y.rows(list(range(self.B.ncols(), self.P.ncols())))

    def in_Z(self, V):
        return solve_f(self.Z, V) is not None

    def zeta(self, V):
        return zeta_map(self.F, self.w, self.mode, V)


def hecke_images(space, reps, jobs=1, shift=None):
    """Normalized A'' for each quotient basis vector (an n x d FMat).

    shift, if given, maps the particular solution S to another solution of
    the same system (used to test that the class does not depend on it).
    """
    F, w, mode = space.F, space.w, space.mode
    G = generators(F)
    Q = space.Q
    if Q.ncols() == 0:
        return Q
    cC, cA, cB = psi_triple(F, w, reps, mode, jobs=jobs)
    Cp = cC.evaluate(w, Q)
    Ap = cA.evaluate(w, Q)
    Bp = cB.evaluate(w, Q)
    n = w.dim
    s = act_matrix_q(w, F, G.sigma)
    x = act_matrix_q(w, F, G.sigma * G.tau)
    I = flint.fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    M = vstack_q([I + s, I + x + x * x])
    R = FMat.vstack([-Cp, -Bp])
    Sre = solve_q(M, R.re)
    Som = solve_q(M, R.om)
    if Sre is None or Som is None:
        raise NormalizationInfeasible("C'/B' cannot be removed for %r %s" % (w, mode))
    S = FMat(Sre, Som, F)
    if shift is not None:
        S = shift(S)
        if not (FMat.rational(M, F) * S - R).is_zero():
            raise NormalizationInfeasible("shifted S no longer solves the system")
    A2 = Ap + S + act(w, F, G.sigma * G.nu, S, mode)
    A3 = (A2 + act(w, F, G.delta, A2, mode)).scale(Fraction(1, 2))
    return A3


def hecke_matrix(space, reps, jobs=1):
    """Matrix of T(varpi) on Z_A / B_A (entries in F; its charpoly is rational)."""
    A3 = hecke_images(space, reps, jobs)
    if A3.ncols() == 0:
        return []
    return space.coords(A3).to_rows()


def hecke_charpoly(H):
    p = charpoly(H) if H else Poly([1])
    coeffs = []
    for c in p.c:
        if isinstance(c, QuadElt):
            if c.b != 0:
                raise AssertionError("characteristic polynomial is not rational")
            c = c.a
        coeffs.append(c)
    return Poly(coeffs)


# ---------------------------------------------------------------------------
# zeta and ratios

def critical_range(w):
    return range((w.l1 - w.l2) // 2 + 1, (w.l1 + w.l2) // 2 + 2)


def zeta_index(w, m):
    """(1-based position in zeta, flat index in V) for the critical value at m."""
    pos = (w.l1 + w.l2) // 2 + 2 - m
    return pos, w.flat(w.l1 + 2 - m, pos)


def zeta_map(F, w, mode, V):
    """zeta(v) for each column v of V, as rows of QuadElt (length l2+1 each)."""
    G = generators(F)
    Vn = V + act(w, F, G.nu.inv(), V, mode)
    rows = Vn.to_rows()
    out = []
    for c in range(V.ncols()):
        z = [None] * (w.l2 + 1)
        for m in critical_range(w):
            pos, f = zeta_index(w, m)
            z[pos - 1] = rows[f][c]
        out.append(z)
    return out


def reliable_positions(space):
    """zeta positions not touched by zeta(B_A)."""
    w = space.w
    bad = set()
    if space.B.ncols():
        for z in space.zeta(space.B):
            for i, x in enumerate(z):
                if not x.is_zero():
                    bad.add(i + 1)
    return [p for p in range(1, w.l2 + 2) if p not in bad]


def _ext_scalar(F, g, x):
    """Coerce a QuadElt with rational coefficients into F(theta), theta a root of g."""
    return QuadElt(ExtElt(g, [x.a]), ExtElt(g, [x.b]), F)


def eigen_data(space, H, factor):
    """Eigenvectors of H for the eigenvalue theta (root of factor) and their zeta-vectors."""
    F, w = space.F, space.w
    g = factor
    d = len(H)
    theta = QuadElt(ExtElt.gen(g), ExtElt(g, [0]), F)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            v = _ext_scalar(F, g, H[i][j])
            if i == j:
                v = v - theta
            row.append(v)
        rows.append(row)
    K = gauss_kernel(rows, d)
    if not K:
        raise ZeroDivisorPivot("no eigenvector found for factor %r" % (g,))
    zq = space.zeta(space.Q)
    out = []
    for vec in K:
        z = []
        for p in range(w.l2 + 1):
            acc = _ext_scalar(F, g, F.zero())
            for j in range(d):
                acc = acc + vec[j] * _ext_scalar(F, g, zq[j][p])
            z.append(acc)
        out.append((vec, z))
    return theta, out


def ratios_from_zeta(space, z):
    """R(m)/R(m_ref) for the critical m at reliable positions.

    m_ref is the smallest m >= k1/2 whose zeta-component is nonzero.
    """
    w = space.w
    good = set(reliable_positions(space))
    ms = [m for m in critical_range(w) if zeta_index(w, m)[0] in good]
    nz = [m for m in ms if not z[zeta_index(w, m)[0] - 1].is_zero()]
    refs = [m for m in nz if 2 * m >= w.k1]
    if not refs:
        return None, []
    mref = refs[0]
    zr = z[zeta_index(w, mref)[0] - 1]
    out = []
    for m in ms:
        if m == mref:
            continue
        v = z[zeta_index(w, m)[0] - 1] / zr
        if (m - mref) % 2:
            v = -v
        out.append((m, v))
    return mref, out


def hecke_element(F, text):
    """Parse '2' or 'a+b*sqrtD' / '4-sqrt13' into a QuadElt."""
    if text is None:
        return None
    if isinstance(text, QuadElt):
        return text
    if isinstance(text, int):
        return F.coerce(text)
    s = text.replace(" ", "")
    tag = "sqrt%d" % F.D
    if tag not in s:
        return F.coerce(int(s))
    i = s.index(tag)
    head = s[:i]
    if head.endswith("*"):
        head = head[:-1]
    # split head into rational part and coefficient
    k = max(head.rfind("+"), head.rfind("-"))
    if k <= 0:
        a, b = 0, head
    else:
        a, b = int(head[:k]), head[k:]
    if b in ("", "+"):
        b = 1
    elif b == "-":
        b = -1
    else:
        b = int(b)
    r = F.sqrtD() * b + a
    if s[i + len(tag):]:
        raise ValueError("cannot parse Hecke element %r" % text)
    return r


def _q_pair(x):
    x = Fraction(x)
    return [x.numerator, x.denominator]


def poly_ints(p):
    """Integer coefficients, leading first."""
    return [int(c) for c in reversed(p.c)]


def ext_value(x, g):
    """{poly, coords} for an element of F(theta); an omega part, if any, goes under 'omega'."""
    if not isinstance(x, QuadElt):
        x = QuadElt(x, 0, None)
    out = {"poly": poly_ints(g), "coords": _ext_coords(x.a, g)}
    if not _is_zero(x.b):
        out["omega"] = _ext_coords(x.b, g)
    return out


def _is_zero(c):
    return c.is_zero() if isinstance(c, ExtElt) else c == 0


def _ext_coords(c, g):
    if isinstance(c, ExtElt):
        return [_q_pair(v) for v in c.coords()]
    return [_q_pair(c)] + [[0, 1]] * (g.degree() - 1)


def _rebase(space, vecs):
    """Replace eigenvectors with vanishing reliable zeta by a sum with one that does not."""
    good = [p - 1 for p in reliable_positions(space)]
    nz = [i for i, (_, z) in enumerate(vecs) if any(not z[p].is_zero() for p in good)]
    if not nz or len(nz) == len(vecs):
        return vecs, len(nz) > 0
    v0, z0 = vecs[nz[0]]
    out = []
    for i, (v, z) in enumerate(vecs):
        if i not in nz:
            v = [a + b for a, b in zip(v, v0)]
            z = [a + b for a, b in zip(z, z0)]
        out.append((v, z))
    return out, True


def zeta_rank(space, vecs):
    """Rank of the reliable zeta components over the eigenvectors of one factor."""
    good = [p - 1 for p in reliable_positions(space)]
    rows = [[z[p] for p in good] for _, z in vecs]
    if not rows or not good:
        return 0
    return len(rows) - len(gauss_kernel([list(c) for c in zip(*rows)], len(rows)))


NORMALIZATION = ("C' and B' removed by S solving (1+sigma)S = -C', (1+x+x^2)S = -B' with "
                 "x = sigma tau; A'' = A' + S + sigma nu S; symmetrized by (1+delta)/2; "
                 "quotient coordinates against the B_A basis")


@dataclass
class RatioReport:
    """The serializable outcome of compute_report; `space` and `H` are kept for callers."""
    field: int
    weights: list
    part: str
    hecke: str
    dims: dict
    charpoly: list
    eigenspaces: list
    provenance: dict
    complete: bool = True
    remainder: list = None
    space: object = dc_field(default=None, compare=False, repr=False)
    H: object = dc_field(default=None, compare=False, repr=False)

    def to_dict(self):
        d = {"field": self.field, "weights": list(self.weights), "part": self.part,
             "hecke": self.hecke, "dims": dict(self.dims), "charpoly": list(self.charpoly),
             "eigenspaces": self.eigenspaces, "provenance": self.provenance}
        if not self.complete:
            d["remainder"] = self.remainder
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(field=d["field"], weights=list(d["weights"]), part=d["part"],
                   hecke=d["hecke"], dims=dict(d["dims"]), charpoly=list(d["charpoly"]),
                   eigenspaces=d["eigenspaces"], provenance=d["provenance"],
                   complete="remainder" not in d, remainder=d.get("remainder"))

    def ratio(self, m, factor=None, index=0):
        """The exact value record of R(m)/R(m_ref) in the first (or given) eigenspace."""
        for e in self.eigenspaces:
            if factor is not None and e["factor"] != factor:
                continue
            if e["index"] != index:
                continue
            for r in e["ratios"]:
                if r["m"] == m:
                    return r
        return None


def compute_report(F, w, mode="plus", varpi=None, factors=None, jobs=1, budget=200000):
    """Spaces, Hecke matrix, charpoly, eigenvectors and ratios as a RatioReport.

    factors: optional monic integer polynomials replacing factor_over_Q.  On
    FactorizationIncomplete the report carries the factors found and the
    remainder, and complete is False.  budget bounds the recombination search.
    """
    space = ClassSpace(F, w, mode)
    d = len(space.qidx)
    reps = std_reps(F, varpi)
    H = hecke_matrix(space, reps, jobs=jobs) if d else []
    cp = hecke_charpoly(H)
    complete, rem = True, None
    if factors is None:
        try:
            fl = _factor_with_mult(factor_over_Q(cp, budget))
        except FactorizationIncomplete as exc:
            fl = _factor_with_mult(exc.factors)
            complete, rem = False, poly_ints(exc.remainder)
    else:
        prod = Poly([1])
        for f in factors:
            prod = prod * f
        if prod != cp:
            raise ValueError("supplied factors do not multiply to the characteristic polynomial")
        fl = _factor_with_mult(factors)
    eig = []
    for f, mult in fl:
        theta, data = eigen_data(space, H, f)
        data, _ = _rebase(space, data)
        rank = zeta_rank(space, data)
        for idx, (vec, z) in enumerate(data):
            mref, rs = ratios_from_zeta(space, z)
            if mref is not None:
                zr = z[zeta_index(w, mref)[0] - 1]
                zn = [x / zr for x in z]
            else:
                zn = z
            eig.append({
                "factor": poly_ints(f), "multiplicity": mult, "index": idx, "zeta_rank": rank,
                "zeta": [ext_value(x, f) for x in zn],
                "ratios": [{"m": m, "m_ref": mref, "value": ext_value(v, f)} for m, v in rs],
            })
    prov = {"rep_choice_rules": list(PREFERENCE_RULES), "normalization": NORMALIZATION,
            "m_ref": "smallest critical m >= k1/2 with nonzero zeta component",
            "coset_residues": [list(_q_pair(c) for c in u.coords()) for u in reps.residues]}
    return RatioReport(field=F.D, weights=[w.k1, w.k2], part=mode,
                       hecke=_hecke_str(F, varpi), dims=space.dims, charpoly=poly_ints(cp),
                       eigenspaces=eig, provenance=prov, complete=complete, remainder=rem,
                       space=space, H=H)


def _hecke_str(F, varpi):
    """varpi as 'q+s*sqrtD' (the grammar hecke_element reads)."""
    if varpi is None:
        return "1"
    q = ((varpi + varpi.conj()) / 2).a
    s = ((varpi - varpi.conj()) / (F.sqrtD() * 2)).a
    if s == 0:
        return str(q)
    coef = "" if abs(s) == 1 else "%s*" % abs(s)
    sign = "-" if s < 0 else ("+" if q != 0 else "")
    return "%s%s%ssqrt%d" % (str(q) if q != 0 else "", sign, coef, F.D)


def _factor_with_mult(fs):
    out = {}
    for f in fs:
        key = tuple(f.c)
        if key in out:
            out[key][1] += 1
        else:
            out[key] = [f, 1]
    return [tuple(v) for v in out.values()]
