"""Hecke operators on the relation side.

For a prime varpi >> 0 the double coset Gamma* diag(1, varpi) Gamma* is split
as a union of Gamma* beta_i.  On a word gamma_1~ ... gamma_m~ with letter
product 1,

    psi(word) = c sum_i beta_i^-1 phi(inner_i),

where inner_i is the product of the lifts of beta_{q_(j-1)(i)} gamma_j
beta_{q_j(i)}^-1.  beta_i^-1 acts through the untwisted representation; since
rho(beta^-1) = rho(adj beta) varpi^-l1 varpi'^-l2 and
c = varpi^(l1) varpi'^((l1+l2)/2), the combined scalar is varpi'^((l1-l2)/2)
and only integral matrices are ever acted on.
"""

from .errors import NoMatchingCoset, NotPrime, LetterAlphabetViolation
from .exact import FMat
from .modgroup import GammaElt, generators, identity, tilde_lift
from .relred import engine
from .symrep import Action, twist_scalar


def _mat_mul(x, y):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _adj(x):
    (a, b), (c, d) = x
    return ((d, -b), (-c, a))


def _is_prime(n):
    n = abs(n)
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


class CosetReps:
    """beta_i with det varpi; the residues u give [[1, u], [0, varpi]] and the last is diag(varpi, 1)."""

    def __init__(self, F, varpi, betas, residues):
        self.F = F
        self.varpi = varpi
        self.betas = betas
        self.residues = residues
        self.adj = [_adj(b) for b in betas]

    @property
    def d(self):
        return len(self.betas)

    def scalar(self, w):
        """c varpi^-l1 varpi'^-l2 = varpi'^((l1-l2)/2)."""
        if self.d == 1:
            return self.F.one()
        return self.varpi.conj() ** ((w.l1 - w.l2) // 2)

    def c(self, w):
        """The normalizing constant c itself (k0 = k1)."""
        if self.d == 1:
            return self.F.one()
        k0 = w.k1
        return self.varpi ** ((k0 + w.k1) // 2 - 2) * self.varpi.conj() ** ((k0 + w.k2) // 2 - 2)

    def conj_elt(self, i, g, j):
        """beta_i g beta_j^-1 as a GammaElt, or None if it is not integral."""
        F = self.F
        m = _mat_mul(_mat_mul(self.betas[i], g.rows()), self.adj[j])
        vi = self.varpi.inverse()
        ent = [x * vi for row in m for x in row]
        if not all(x.is_integral() for x in ent):
            return None
        return GammaElt(tuple(ent), F)

    def __repr__(self):
        return "CosetReps(varpi=%r, d=%d)" % (self.varpi, self.d)


def residues_mod(F, varpi):
    """Representatives of O_F / (varpi), smallest first."""
    N = abs(varpi.norm())
    N = int(N)
    reps = []
    B = N
    cands = [F.elt(a, b) for a in range(-B, B + 1) for b in range(-B, B + 1)]
    cands.sort(key=lambda x: (abs(x.a) + abs(x.b), abs(x.b), abs(x.a), x.a < 0, x.b < 0))
    vi = varpi.inverse()
    for x in cands:
        if all(not ((x - y) * vi).is_integral() for y in reps):
            reps.append(x)
            if len(reps) == N:
                break
    if len(reps) != N:
        raise AssertionError("residue enumeration incomplete")
    return reps


def std_reps(F, varpi=None):
    """Coset representatives for T(varpi); varpi=None gives the identity operator."""
    if varpi is None:
        return CosetReps(F, F.one(), [((F.one(), F.zero()), (F.zero(), F.one()))], [])
    varpi = F.coerce(varpi)
    N = varpi.norm()
    if not varpi.is_integral() or not varpi.is_totally_positive():
        raise NotPrime("%r is not a totally positive integer" % (varpi,))
    N = int(N)
    r = int(round(N ** 0.5))
    inert = r * r == N and _is_prime(r) and (varpi / r).norm() == 1 \
        and F.unit_log(varpi / r) is not None
    if not (_is_prime(N) or inert):
        raise NotPrime("(%r) is not a prime ideal" % (varpi,))
    one, zero = F.one(), F.zero()
    res = residues_mod(F, varpi)
    betas = [((one, u), (zero, varpi)) for u in res] + [((varpi, zero), (zero, one))]
    return CosetReps(F, varpi, betas, res)


def perm_of(g, reps):
    """q with beta_i g beta_q(i)^-1 in Gamma*."""
    out = []
    for i in range(reps.d):
        hits = [j for j in range(reps.d) if reps.conj_elt(i, g, j) is not None]
        if len(hits) != 1:
            raise NoMatchingCoset("coset %d of %r matched %d representatives" % (i, g, len(hits)))
        out.append(hits[0])
    return out


# ---------------------------------------------------------------------------
# combinations  sum  rho(M) (a_M A + b_M B)

class Combo:
    """Formal sum of untwisted rho(M) applied to a_M A + b_M B, M integral.

    Keys are the integral matrices; coefficients live in F.
    """

    def __init__(self, F):
        self.F = F
        self.terms = {}

    def add_lin(self, lin, w, left=None, scalar=1, mode="plus"):
        """Add scalar * rho(left) * (value of lin), twisted action for the Gamma* part."""
        F = self.F
        for g in lin.support():
            ca = lin.a.get(g, 0)
            cb = lin.b.get(g, 0)
            s = twist_scalar(w, g.rows(), F) * scalar
            if mode == "minus":
                s = s * g.chi()
            M = g.rows() if left is None else _mat_mul(left, g.rows())
            self._add(M, s * ca, s * cb)
        return self

    def _add(self, M, ca, cb):
        key = tuple((x.a, x.b) for row in M for x in row)
        t = self.terms.get(key)
        if t is None:
            self.terms[key] = [M, ca, cb]
        else:
            t[1] = t[1] + ca
            t[2] = t[2] + cb

    def iadd(self, other, s=1):
        for M, ca, cb in other.terms.values():
            self._add(M, ca * s, cb * s)
        return self

    def evaluate(self, w, A, B=None):
        F = self.F
        act = Action(w, F)
        out = FMat.zeros(w.dim, A.ncols(), F)
        for M, ca, cb in self.terms.values():
            V = None
            if ca != 0:
                V = A.scale(ca)
            if cb != 0 and B is not None:
                V = B.scale(cb) if V is None else V + B.scale(cb)
            if V is None:
                continue
            out = out + act.apply(M, V, twist=False)
        return out

    def __len__(self):
        return len(self.terms)


# ---------------------------------------------------------------------------
# psi on words

PLUS_PROBES = {
    "C": ("s", "s"),
    "A": ("s", "n", "s", "n"),
    "B": ("s", "t", "s", "t", "s", "t"),
}

# the same words written in the five free generators s, t, n2 = nu^2,
# ns = nu s nu^-1, nt = nu t nu^-1, and their nu~-conjugates
MINUS_PROBES = {
    "C": ("s", "s"),
    "A": ("s", "ns", "n2"),
    "B": ("s", "t", "s", "t", "s", "t"),
}
MINUS_CONJ = {
    "C": ("ns", "ns"),
    "A": ("ns", "n2", "s"),
    "B": ("ns", "nt", "ns", "nt", "ns", "nt"),
}


def letter_elt(F, name):
    G = generators(F)
    nu = G.nu
    return {
        "s": G.sigma, "t": G.tau, "n": nu,
        "n2": nu * nu, "ns": nu * G.sigma * nu.inv(), "nt": nu * G.tau * nu.inv(),
    }[name]


def _check_alphabet(F, letters, mode):
    for x in letters:
        if mode == "minus":
            if x not in ("s", "t", "n2", "ns", "nt"):
                raise LetterAlphabetViolation("letter %r is not a free generator of the minus cover" % (x,))
        elif x not in ("s", "t", "n"):
            raise LetterAlphabetViolation("letter %r is neither sigma nor parabolic" % (x,))


def psi_word(F, letters, reps, mode="plus"):
    """The inner relation values: list of (i, Lin) with psi = c sum_i beta_i^-1 phi(inner_i)."""
    _check_alphabet(F, letters, mode)
    elts = [letter_elt(F, x) for x in letters]
    prod = identity(F)
    for g in elts:
        prod = prod * g
    if not prod.is_identity():
        raise LetterAlphabetViolation("letter product is not 1")
    E = engine(F)
    out = []
    for i in range(reps.d):
        q = i
        word = None
        for g in elts:
            hits = [j for j in range(reps.d) if reps.conj_elt(q, g, j) is not None]
            if len(hits) != 1:
                raise NoMatchingCoset("coset %d of %r matched %d representatives" % (q, g, len(hits)))
            j = hits[0]
            piece = tilde_lift(reps.conj_elt(q, g, j))
            word = piece if word is None else word * piece
            q = j
        if q != i:
            raise AssertionError("letter product 1 but the coset permutation is not trivial")
        out.append((i, E.phi_word(word)))
    return out


def _word_task(args):
    F, letters, reps, mode = args
    return psi_word(F, letters, reps, mode)


def _inner_parts(F, words, reps, mode, jobs):
    """psi_word for each word, in order; jobs > 1 spreads them over processes."""
    tasks = [(F, letters, reps, mode) for letters in words]
    if jobs <= 1 or len(tasks) < 2:
        return [_word_task(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
        return list(ex.map(_word_task, tasks))


def psi_combo(F, w, letters, reps, mode="plus", left=None, parts=None):
    """psi(word) as a Combo (optionally premultiplied by rho'(left) for left in Gamma*)."""
    if parts is None:
        parts = psi_word(F, letters, reps, mode)
    s = reps.scalar(w)
    if left is not None:
        s = s * twist_scalar(w, left.rows(), F)
    co = Combo(F)
    for i, lin in parts:
        L = reps.adj[i]
        if left is not None:
            L = _mat_mul(left.rows(), L)
        co.add_lin(lin, w, left=L, scalar=s, mode=mode)
    return co


def psi_triple(F, w, reps, mode="plus", jobs=1):
    """Combos for psi(sigma~^2), psi((sigma~ nu~)^2), psi((sigma~ tau~)^3).

    In minus mode the result is the projection (1 - e)/2 psi with
    (e psi)(r) = nu^-1 psi(nu~ r nu~^-1).  The relation reductions are
    independent of the weight, so jobs only changes where they run.
    """
    keys = ("C", "A", "B")
    if mode == "plus":
        words = [PLUS_PROBES[k] for k in keys]
        parts = _inner_parts(F, words, reps, mode, jobs)
        return tuple(psi_combo(F, w, PLUS_PROBES[k], reps, mode, parts=p)
                     for k, p in zip(keys, parts))
    nui = generators(F).nu.inv()
    words = [MINUS_PROBES[k] for k in keys] + [MINUS_CONJ[k] for k in keys]
    parts = _inner_parts(F, words, reps, mode, jobs)
    half = F.one() / 2
    out = []
    for n, k in enumerate(keys):
        co = psi_combo(F, w, MINUS_PROBES[k], reps, mode, parts=parts[n])
        ce = psi_combo(F, w, MINUS_CONJ[k], reps, mode, left=nui, parts=parts[n + 3])
        out.append(Combo(F).iadd(co, half).iadd(ce, -half))
    return tuple(out)
