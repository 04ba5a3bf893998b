"""Elements of Gamma* = {g in GL2(O_F) : det g in eps^Z} modulo units.

Also the free group on sigma~, nu~, tau~, the decomposition of parabolic
elements, the choice of coset representatives for P \\ Gamma and the
resulting lifts gamma -> gamma~ into the free group.
"""

import math

from .exact import QuadElt
from .errors import (LiftRecursionLimit, NotParabolic, RelationFailed)


# ---------------------------------------------------------------------------
# group elements

def _pos(x):
    """Positivity for the canonical sign: lexicographic on (a, b)."""
    return x.a > 0 or (x.a == 0 and x.b > 0)


class GammaElt:
    """2x2 matrix over O_F modulo scalar units, stored in canonical form.

    The canonical representative has det in {1, eps} (or {-1, -eps} for
    elements outside Gamma*, such as delta) and a positive first nonzero
    entry in reading order.
    """

    __slots__ = ("m", "F", "det_exp", "det_sign", "_key")

    def __init__(self, m, F, canonical=True):
        a, b, c, d = (F.coerce(x) for x in m)
        self.F = F
        if not canonical:
            self.m = (a, b, c, d)
            self.det_sign, self.det_exp = 1, 0
            self._key = None
            return
        dt = a * d - b * c
        ul = F.unit_log(dt)
        if ul is None:
            raise ValueError("determinant %r is not a unit" % (dt,))
        s, n = ul
        h = n // 2
        if h:
            u = F.eps_pow(-h)
            a, b, c, d = a * u, b * u, c * u, d * u
        for x in (a, b, c, d):
            if not x.is_zero():
                if not _pos(x):
                    a, b, c, d = -a, -b, -c, -d
                break
        self.m = (a, b, c, d)
        self.det_sign = s
        self.det_exp = n - 2 * h
        self._key = (a.a, a.b, b.a, b.b, c.a, c.b, d.a, d.b)

    @classmethod
    def of(cls, F, a, b, c, d):
        return cls((a, b, c, d), F)

    def key(self):
        return self._key

    def __eq__(self, o):
        return isinstance(o, GammaElt) and self._key == o._key

    def __hash__(self):
        return hash(self._key)

    def __mul__(self, o):
        a, b, c, d = self.m
        e, f, g, h = o.m
        return GammaElt((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), self.F)

    def inv(self):
        a, b, c, d = self.m
        return GammaElt((d, -b, -c, a), self.F)

    def __pow__(self, n):
        r = identity(self.F)
        x = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            r = r * x
        return r

    def det(self):
        a, b, c, d = self.m
        return a * d - b * c

    def in_gamma_star(self):
        return self.det_sign == 1

    def chi(self):
        """(-1)^n for det = eps^n: the character defining the minus part."""
        return -1 if self.det_exp % 2 else 1

    def rows(self):
        a, b, c, d = self.m
        return ((a, b), (c, d))

    def is_identity(self):
        return self == identity(self.F)

    def is_upper(self):
        return self.m[2].is_zero()

    def __repr__(self):
        a, b, c, d = self.m
        return "[[%r, %r], [%r, %r]]" % (a, b, c, d)


def identity(F):
    return GammaElt((1, 0, 0, 1), F)


def T(F, x):
    return GammaElt((1, x, 0, 1), F)


def diag(F, u, v=1):
    return GammaElt((u, 0, 0, v), F)


class GeneratorSet:
    def __init__(self, F):
        e = F.eps
        self.F = F
        self.sigma = GammaElt((0, 1, -1, 0), F)
        self.mu = GammaElt((e, 0, 0, e.inverse()), F)
        self.tau = T(F, 1)
        self.eta = T(F, F.omega)
        self.nu = diag(F, e)
        self.delta = GammaElt((-1, 0, 0, 1), F)


_GENS = {}


def generators(F):
    g = _GENS.get(F.D)
    if g is None:
        g = _GENS[F.D] = GeneratorSet(F)
    return g


# ---------------------------------------------------------------------------
# words in the free group on sigma~, nu~, tau~

SIG, NU, TAU = 1, 2, 3
_NAMES = {1: "s", -1: "S", 2: "n", -2: "N", 3: "t", -3: "T"}


class Word:
    """Freely reduced word; letters are +-1 (sigma~), +-2 (nu~), +-3 (tau~)."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        out = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        self.letters = tuple(out)

    @classmethod
    def parse(cls, s):
        inv = {v: k for k, v in _NAMES.items()}
        s = s.replace("m", "nn").replace("M", "NN").replace("e", "ntN").replace("E", "nTN")
        return cls(inv[ch] for ch in s)

    def __mul__(self, o):
        return Word(self.letters + o.letters)

    def inv(self):
        return Word(-x for x in reversed(self.letters))

    def __pow__(self, n):
        w = Word()
        base = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            w = w * base
        return w

    def __len__(self):
        return len(self.letters)

    def __eq__(self, o):
        return isinstance(o, Word) and self.letters == o.letters

    def __hash__(self):
        return hash(self.letters)

    def evaluate(self, F):
        G = generators(F)
        base = {SIG: G.sigma, NU: G.nu, TAU: G.tau}
        r = identity(F)
        for x in self.letters:
            g = base[abs(x)]
            r = r * (g if x > 0 else g.inv())
        return r

    def __repr__(self):
        return "".join(_NAMES[x] for x in self.letters) or "1"


def letter_word(x, n=1):
    return Word([x] * n if n >= 0 else [-x] * (-n))


# ---------------------------------------------------------------------------
# parabolic decomposition

def p_normalize(p):
    """(u, x) with p = [[u, x], [0, 1]] up to units, u in eps^Z."""
    a, b, c, d = p.m
    if not c.is_zero():
        raise NotParabolic("%r is not upper triangular" % (p,))
    di = d.inverse()
    u = a * di
    x = b * di
    return u, x


def p_decompose(p):
    """(flag, a, b, c) with p = nu^flag mu^a tau^b eta^c, flag in {0, 1}."""
    F = p.F
    u, x = p_normalize(p)
    ul = F.unit_log(u)
    if ul is None or ul[0] != 1:
        raise NotParabolic("%r is not in P*" % (p,))
    n = ul[1]
    flag = n % 2
    a = (n - flag) // 2
    y = x * u.inverse()
    if not y.is_integral():
        raise NotParabolic("%r has a non-integral translation" % (p,))
    return flag, a, y.a, y.b


def p_word(p):
    """nu~^flag mu~^a tau~^b eta~^c as a freely reduced word."""
    flag, a, b, c = p_decompose(p)
    return (letter_word(NU, flag + 2 * a) * letter_word(TAU, b)
            * Word([NU]) * letter_word(TAU, c) * Word([-NU]))


# ---------------------------------------------------------------------------
# coset representatives and lifts

PREFERENCE_RULES = ("|alpha|+|beta| minimal", "|alpha| minimal", "|beta| minimal",
                    "alpha >= 0", "beta >= 0")


class RepChoice:
    """Chosen representative of P*gamma, its lift, and the case used."""

    def __init__(self, rep, lift, case, norms):
        self.rep = rep
        self.lift = lift
        self.case = case
        self.norms = norms

    def __repr__(self):
        return "RepChoice(case=%d, rep=%r, lift=%r)" % (self.case, self.rep, self.lift)


def _det_one(g):
    """Matrix entries of g scaled to determinant 1 (requires det = eps^even)."""
    a, b, c, d = g.m
    if g.det_exp % 2 or g.det_sign != 1:
        raise ValueError("element has no determinant-one representative")
    return a, b, c, d


def _normalize_c(F, a, b, c, d):
    """Left multiply by diag(v^-1, v) so that c >> 0 and 1 <= c'/c < eps^4."""
    e = F.eps
    nc = c.norm()
    k = 0 if nc > 0 else 1
    # log of the ratio c'/c moves by -2 log(eps) per unit step of k (k has fixed parity)
    r0 = math.log(abs(float(c.conj()) / float(c)))
    step = -2 * F.log_eps
    target = 2 * F.log_eps
    kk = round((target - r0) / step)
    if (kk - k) % 2:
        kk += 1
    e4 = e ** 4
    for delta in range(0, 12):
        for kt in (kk - 2 * delta, kk + 2 * delta):
            v = F.eps_pow(kt)
            c1 = v * c
            if c1.sign() < 0:
                v = -v
                c1 = -c1
            if c1.sign2() <= 0:
                continue
            c1c = c1.conj()
            if (c1c - c1).sign() >= 0 and (c1c - e4 * c1).sign() < 0:
                vi = v.inverse()
                return a * vi, b * vi, c1, d * v
    raise AssertionError("unit normalization of c failed")


def _pref_candidates(limit):
    for s in range(limit + 1):
        cands = []
        for al in range(-s, s + 1):
            rest = s - abs(al)
            for be in ({rest, -rest}):
                cands.append((abs(al), abs(be), al < 0, be < 0, al, be))
        for t in sorted(cands):
            yield t[4], t[5]


def _choose_a(F, a, c):
    """Smallest representative of a mod c (by the preference order) with |N| < |N(c)|."""
    nc = abs(c.norm())
    ci = c.inverse()
    for al, be in _pref_candidates(8 * nc + 40):
        a2 = QuadElt(al, be, F)
        if abs(a2.norm()) >= nc:
            continue
        if ((a2 - a) * ci).is_integral():
            return a2
    raise LiftRecursionLimit("no small representative of %r mod %r" % (a, c))


def _delta_rep(F, a, b, c, d):
    """Representative in P gamma for a det-one gamma with c != 0."""
    if F.unit_log(c) is not None:
        return (F.zero(), -F.one(), F.one(), d * c.inverse()), 2
    a, b, c, d = _normalize_c(F, a, b, c, d)
    a2 = _choose_a(F, a, c)
    t = (a2 - a) * c.inverse()
    return (a2, b + t * d, c, d), 3


def coset_rep(g):
    """RepChoice for the coset P* g (g in Gamma*)."""
    F = g.F
    if not g.in_gamma_star():
        raise ValueError("coset_rep needs an element of Gamma*")
    if g.is_upper():
        return RepChoice(identity(F), Word(), 1, [])
    if g.det_exp % 2:
        g = generators(F).nu.inv() * g
    a, b, c, d = _det_one(g)
    (a2, b2, c2, d2), case = _delta_rep(F, a, b, c, d)
    rep = GammaElt((a2, b2, c2, d2), F)
    lift, norms = _lift_delta(F, (a2, b2, c2, d2), 0)
    return RepChoice(rep, lift, case, norms)


_MAX_DEPTH = 64


def _lift_delta(F, m, depth):
    """delta~ for a representative matrix m = (a, b, c, d) with det 1, c != 0."""
    if depth > _MAX_DEPTH:
        raise LiftRecursionLimit("representative recursion too deep")
    a, b, c, d = m
    if F.unit_log(c) is not None:
        dd = d * c.inverse()
        return Word([SIG]) * p_word(T(F, dd)), [abs(c.norm())]
    # sigma^-1 delta = [[-c, -d], [a, b]] = p1 delta1
    s = (-c, -d, a, b)
    m1, _ = _delta_rep(F, *s)
    d1 = GammaElt(m1, F)
    p1 = GammaElt(s, F) * d1.inv()
    w, norms = _lift_delta(F, m1, depth + 1)
    return Word([SIG]) * p_word(p1) * w, [abs(c.norm())] + norms


def tilde_lift(g):
    """A word g~ in the free group with pi*(g~) = g, deterministic in g."""
    if not g.in_gamma_star():
        raise ValueError("tilde_lift needs an element of Gamma*")
    rc = coset_rep(g)
    p = g * rc.rep.inv()
    return p_word(p) * rc.lift


# ---------------------------------------------------------------------------
# presentation relations

def verify_relations(F):
    """Check the defining relations as exact identities; returns a report list."""
    G = generators(F)
    s, m, t, h, n = G.sigma, G.mu, G.tau, G.eta, G.nu
    one = identity(F)
    checks = [
        ("sigma^2 = 1", s * s, one),
        ("(sigma tau)^3 = 1", (s * t) ** 3, one),
        ("(sigma mu)^2 = 1", (s * m) ** 2, one),
        ("tau eta = eta tau", t * h, h * t),
        ("mu tau mu^-1 = tau^A eta^B", m * t * m.inv(), t ** F.A * h ** F.B),
        ("mu eta mu^-1 = tau^C eta^D", m * h * m.inv(), t ** F.C * h ** F.D_rel),
        ("(sigma nu)^2 = 1", (s * n) ** 2, one),
        ("tau nu tau nu^-1 = nu tau nu^-1 tau", t * n * t * n.inv(), n * t * n.inv() * t),
        ("mu = nu^2", m, n * n),
        ("eta = nu tau nu^-1", h, n * t * n.inv()),
    ]
    e = F.eps
    for tt in (F.one(), e, -e, e.inverse(), e * e):
        lhs = s * T(F, tt) * s
        rhs = T(F, -tt.inverse()) * s * GammaElt((-tt, 1, 0, -tt.inverse()), F)
        checks.append(("sigma T(t) sigma = T(-1/t) sigma [[-t, 1], [0, -1/t]], t = %r" % (tt,), lhs, rhs))
    # sigma eta sigma = tau^A' eta^B' sigma eta^-1 mu with -eps^-1 = A' + B' eps
    me = -e.inverse()
    checks.append(("sigma eta sigma = tau^A' eta^B' sigma eta^-1 mu", s * h * s,
                   t ** me.a * h ** me.b * s * h.inv() * m))
    if F.D == 5:
        checks.append(("nu^2 tau nu^-2 = tau nu tau nu^-1",
                       n * n * t * n.inv() * n.inv(), t * n * t * n.inv()))
    if F.D == 13:
        checks.append(("nu^2 tau nu^-2 = tau (nu tau nu^-1)^3",
                       n * n * t * n.inv() * n.inv(), t * (n * t * n.inv()) ** 3))
    report = []
    for name, lhs, rhs in checks:
        ok = lhs == rhs
        report.append((name, ok))
        if not ok:
            raise RelationFailed(name)
    return report


def four_term_word(F, x, u):
    """The relation T(x) s T((1-u)/x) s T(-x/u) s T(-u(1-u)/x) s = diag(u, u^-1)
    as a list of P*-blocks for sigma~ p1 sigma~ p2 ... (rotated to start at sigma~)."""
    x = F.coerce(x)
    u = F.coerce(u)
    a = (1 - u) / x
    b = -x / u
    c = -u * (1 - u) / x
    # T(x) s T(a) s T(b) s T(c) s D(u)^-1 = 1; rotate T(x) to the end
    Dinv = GammaElt((u.inverse(), 0, 0, u), F)
    return [T(F, a), T(F, b), T(F, c), Dinv * T(F, x)]
