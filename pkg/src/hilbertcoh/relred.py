"""Reduction of phi on relation words to the two unknowns A and B.

phi is a homomorphism R* -> V with phi(g r g^-1) = g.phi(r), vanishing on
relations among parabolic letters and on sigma~^2 (C = 0).  Every value
phi(r) is computed as a formal expression

    sum_g a_g g.A + sum_g b_g g.B,     g in Gamma*,

with A = phi((sigma~ nu~)^2) and B = phi((sigma~ tau~)^3).  The derivation
is the same for the plus and minus parts; the minus part differs only in
that g acts through chi(g) rho'(g), which is applied at evaluation time.

A relation in normal form is a list [p1, ..., pm] of P*-elements standing
for sigma~ p1~ sigma~ p2~ ... sigma~ pm~.  The engine keeps the invariant

    phi(original) = acc + g.phi(current)

and rewrites the current relation at its front only.  A local rewrite
X -> Y at the front costs g.phi(X Y^-1).
"""

from .errors import NotARelation, ReductionStuck, DivisibilityViolated
from .exact import FMat
from .modgroup import GammaElt, T, generators, identity, p_normalize, SIG, NU, Word
from .symrep import Action


# ---------------------------------------------------------------------------
# formal values

class Lin:
    """Formal sum  sum a_g g.A + sum b_g g.B  with rational coefficients."""

    __slots__ = ("a", "b")

    def __init__(self, a=None, b=None):
        self.a = a if a is not None else {}
        self.b = b if b is not None else {}

    @classmethod
    def A(cls, F):
        return cls({identity(F): 1}, {})

    @classmethod
    def B(cls, F):
        return cls({}, {identity(F): 1})

    def copy(self):
        return Lin(dict(self.a), dict(self.b))

    @staticmethod
    def _add_into(d, e, s):
        for g, c in e.items():
            v = d.get(g, 0) + s * c
            if v:
                d[g] = v
            else:
                d.pop(g, None)

    def iadd(self, o, s=1):
        self._add_into(self.a, o.a, s)
        self._add_into(self.b, o.b, s)
        return self

    def __add__(self, o):
        return self.copy().iadd(o)

    def __sub__(self, o):
        return self.copy().iadd(o, -1)

    def __neg__(self):
        return Lin({g: -c for g, c in self.a.items()}, {g: -c for g, c in self.b.items()})

    def scale(self, s):
        if s == 0:
            return Lin()
        return Lin({g: s * c for g, c in self.a.items()}, {g: s * c for g, c in self.b.items()})

    def lmul(self, h):
        """h.(this value)."""
        if h.is_identity():
            return self.copy()
        a, b = {}, {}
        for g, c in self.a.items():
            k = h * g
            a[k] = a.get(k, 0) + c
        for g, c in self.b.items():
            k = h * g
            b[k] = b.get(k, 0) + c
        return Lin({g: c for g, c in a.items() if c}, {g: c for g, c in b.items() if c})

    def is_zero(self):
        return not self.a and not self.b

    def support(self):
        return set(self.a) | set(self.b)

    def __repr__(self):
        return "Lin(%d A-terms, %d B-terms)" % (len(self.a), len(self.b))


def evaluate(lin, w, F, mode, A, B=None):
    """Value of a formal sum for seed blocks A, B (FMat dim V x k)."""
    act = Action(w, F)
    out = FMat.zeros(w.dim, A.ncols(), F)
    for g in lin.support():
        ca = lin.a.get(g, 0)
        cb = lin.b.get(g, 0)
        V = None
        if ca:
            V = A.scale(ca)
        if cb and B is not None:
            V = B.scale(cb) if V is None else V + B.scale(cb)
        if V is None:
            continue
        scal = g.chi() if mode == "minus" else None
        out = out + act.apply(g.rows(), V, twist=True, scalar=scal)
    return out


def linexpr(lin, w, F, mode):
    """The pair (M_A, M_B) of dim V x dim V matrices over F."""
    I = FMat.identity(w.dim, F)
    Z = FMat.zeros(w.dim, w.dim, F)
    MA = evaluate(Lin(lin.a, {}), w, F, mode, I, Z)
    MB = evaluate(Lin(lin.b, {}), w, F, mode, I, Z)
    return MA, MB


# ---------------------------------------------------------------------------
# parabolic helpers

def _split(p):
    """p = diag(u, 1) T(y):  returns (u, y)."""
    u, x = p_normalize(p)
    return u, x * u.inverse()


def _diag(F, u):
    return GammaElt((u, 0, 0, 1), F)


def _eps_exp(F, u):
    s, n = F.unit_log(u)
    if s != 1:
        raise AssertionError("diagonal entry %r is not a power of eps" % (u,))
    return n


def _is_unit(F, x):
    return not x.is_zero() and F.unit_log(x) is not None


# ---------------------------------------------------------------------------
# the engine

class Engine:
    """Formal reduction over one field; memoizes two-term, B(t) and relation values.

    With rng given, rule sites and splice candidates are chosen at random
    (used to check that the value does not depend on the order).
    """

    def __init__(self, F, trace=False, rng=None):
        self.F = F
        self.rng = rng
        self.G = generators(F)
        self._two = {}
        self._bt = {}
        self._rel = {}
        self.trace = [] if trace else None

    # -- basic values ------------------------------------------------------
    def two_term(self, n):
        """phi((sigma~ nu~^n)^2)."""
        r = self._two.get(n)
        if r is not None:
            return r
        nu = self.G.nu
        out = Lin()
        if n > 0:
            for j in range(n):
                out.iadd(Lin({nu ** (-j): 1}, {}))
        elif n < 0:
            for j in range(1, -n + 1):
                out.iadd(Lin({nu ** j: -1}, {}))
        self._two[n] = out
        return out

    def two_term_diag(self, D):
        """phi((sigma~ D~)^2) for D = diag(eps^n, 1)."""
        u, y = _split(D)
        if not y.is_zero():
            raise AssertionError("not diagonal")
        return self.two_term(_eps_exp(self.F, u))

    def brel(self, t):
        """Syllables of sigma~ T(t) sigma~ T(1/t) sigma~ T(t) D_t, D_t = diag(t, 1/t)."""
        F = self.F
        ti = t.inverse()
        Dt = GammaElt((t, 0, 0, ti), F)
        return ["s", T(F, t), "s", T(F, ti), "s", T(F, t) * Dt]

    def b_unit(self, t):
        """B(t) = phi(sigma~ T(t) sigma~ T(1/t) sigma~ T(t) D_t) for a unit t.

        Derived from B(1) by conjugating with nu~ (t -> t eps^-+1) and by
        inversion (t0 -> -1/t0); each derived word is brought back to the
        exact form of the target relation with the usual rewriting costs.
        """
        F = self.F
        t = F.coerce(t)
        key = (t.a, t.b)
        r = self._bt.get(key)
        if r is not None:
            return r
        s, k = F.unit_log(t)
        if s == 1 and k == 0:
            r = Lin.B(F)
        elif s == 1:
            h = self.G.nu.inv() if k > 0 else self.G.nu
            t0 = t * (F.eps.inverse() if k > 0 else F.eps)
            syl = [h] + self.brel(t0) + [h.inv()]
            norm, cost = self._push_right(syl)
            r = self._match(self.b_unit(t0).lmul(h) - cost, norm, self.brel(t)[1::2])
        else:
            t0 = -t.inverse()
            syl = ["s" if x == "s" else x.inv() for x in reversed(self.brel(t0))]
            norm, cost = self._push_right(syl)
            r = self._match(-self.b_unit(t0) - cost, norm, self.brel(t)[1::2])
        self._bt[key] = r
        return r

    def _match(self, val, syl, target):
        """phi(target) given phi(word) = val, where word is a cyclic rewrite of target."""
        F = self.F
        lead, blocks = _blocks_of(F, syl)
        val = val.lmul(lead.inv())
        for i in range(len(blocks)):
            g, rel = self._rotate_to(identity(F), blocks, i)
            acc, g, rel = self._push_front_diag(Lin(), g, rel)
            if rel == target:
                return (val - acc).lmul(g.inv())
        raise AssertionError("B(t) derivation did not reach the expected relation")

    def _push_right(self, syls):
        """Move diagonal parts rightwards through sigma~ letters.

        Returns (normalized syllables, cost) with phi(word) = cost + phi(normalized);
        all P-blocks but the last are pure translations.
        """
        F = self.F
        merged = []
        for x in syls:
            if x != "s" and merged and merged[-1] != "s":
                merged[-1] = merged[-1] * x
            else:
                merged.append(x)
        out = []
        prefix = identity(F)
        carry = identity(F)
        cost = Lin()
        last = len(merged) - 1
        for idx, x in enumerate(merged):
            if x == "s":
                if not carry.is_identity():
                    cost.iadd(self.two_term_diag(carry).lmul(prefix * carry))
                    carry = carry.inv()
                out.append("s")
                prefix = prefix * self.G.sigma
                continue
            tot = carry * x
            if idx == last:
                out.append(tot)
                carry = identity(F)
                continue
            u, xx = p_normalize(tot)
            tr = T(F, xx)
            out.append(tr)
            prefix = prefix * tr
            carry = _diag(F, u)
        if merged and merged[-1] == "s":
            out.append(carry)
        return out, cost

    # -- relations ---------------------------------------------------------
    def phi_word(self, word):
        """phi of a relation word of the free group."""
        F = self.F
        if not word.evaluate(F).is_identity():
            raise NotARelation("word %r does not evaluate to 1" % (word,))
        lead, blocks = _blocks_of(F, word_syllables(word, F))
        if blocks is None:
            return Lin()
        return self.reduce(blocks).lmul(lead)

    def reduce(self, blocks):
        """phi(sigma~ p1~ ... sigma~ pm~) as a formal sum."""
        F = self.F
        blocks = list(blocks)
        key = tuple(p.key() for p in blocks)
        r = self._rel.get(key)
        if r is not None:
            return r
        if not _eval_blocks(F, blocks).is_identity():
            raise NotARelation("blocks do not form a relation")
        r = self._solve(blocks, depth=3)
        self._rel[key] = r
        return r

    def _solve(self, blocks, depth):
        acc = Lin()
        g = identity(self.F)
        rel = list(blocks)
        while True:
            acc, g, rel, stuck = self._greedy(acc, g, rel)
            if not stuck:
                return acc
            if depth == 0:
                raise ReductionStuck(rel)
            last = None
            cands = self._splices(rel)
            if self.rng is not None:
                cands = list(cands)
                self.rng.shuffle(cands)
            for cand in cands:
                i, u = cand
                a2, g2, rel2 = self._splice(acc, g, rel, i, u)
                try:
                    sub = self._solve(rel2, depth - 1)
                except ReductionStuck as e:
                    last = e
                    continue
                return a2 + sub.lmul(g2)
            raise last if last is not None else ReductionStuck(rel)

    def _rotate_to(self, g, rel, i):
        for _ in range(i):
            p1 = rel[0]
            g = g * self.G.sigma * p1
            rel = rel[1:] + [p1]
        return g, rel

    def _greedy(self, acc, g, rel):
        F = self.F
        while rel:
            m = len(rel)
            if m == 1:
                raise NotARelation("one-term relation")
            trans = [_split(p) for p in rel]
            zeros = [i for i, (u, y) in enumerate(trans) if y.is_zero()]
            units = [i for i, (u, y) in enumerate(trans) if not y.is_zero() and _is_unit(F, y)]
            if self.rng is None:
                pick = ("zero", zeros[0]) if zeros else (("unit", units[0]) if units else None)
            else:
                cands = [("zero", i) for i in zeros] + [("unit", i) for i in units]
                pick = self.rng.choice(cands) if cands else None
            if pick is None:
                return acc, g, rel, True
            if pick[0] == "zero":
                g, rel = self._rotate_to(g, rel, pick[1])
                D = rel[0]
                acc = acc + self.two_term_diag(D).lmul(g)
                P0 = D.inv() * rel[1]
                if m == 2:
                    if not P0.is_identity():
                        raise AssertionError("two-term relation left a remainder")
                    return acc, g, [], False
                g = g * P0
                rel = rel[2:-1] + [rel[-1] * P0]
                self._log("zero", m)
                continue
            ui = pick[1]
            g, rel = self._rotate_to(g, rel, ui)
            acc, g, rel = self._push_front_diag(acc, g, rel)
            t = _split(rel[0])[1]
            acc = acc + self.b_unit(t).lmul(g)
            ti = t.inverse()
            Dt_inv = GammaElt((ti, 0, 0, t), F)
            P0 = Dt_inv * T(F, -t)
            g = g * P0
            if m == 2:
                raise AssertionError("unit rule on a two-term relation")
            rel = [T(F, -ti) * rel[1]] + rel[2:-1] + [rel[-1] * P0]
            self._log("unit", m)
        return acc, g, [], False

    def _push_front_diag(self, acc, g, rel):
        """sigma~ D~ T~(y) ... -> D~^-1 sigma~ T~(y) ..., then rotate D^-1 away."""
        F = self.F
        u, y = _split(rel[0])
        if u == 1:
            return acc, g, rel
        D = _diag(F, u)
        acc = acc + self.two_term_diag(D).lmul(g)
        Di = D.inv()
        g = g * Di
        rel = [T(F, y)] + rel[1:-1] + [rel[-1] * Di] if len(rel) > 1 else [T(F, y) * Di]
        return acc, g, rel

    def _splices(self, rel):
        """Candidate (position, unit u) pairs, most promising first."""
        F = self.F
        out = []
        m = len(rel)
        for i in range(m):
            u_i, y = _split(rel[i])
            for u in unit_candidates(F):
                if u == 1:
                    continue
                q = (1 - u) / y
                if not q.is_integral() or not _is_unit(F, q):
                    continue
                out.append((i, u))
        # prefer splices that create a zero or unit translation next door
        def score(c):
            i, u = c
            _, _, rel2 = self._splice(Lin(), identity(F), rel, i, u, dry=True)
            return 0 if any(y.is_zero() or _is_unit(F, y) for _, y in map(_split, rel2)) else 1
        out.sort(key=score)
        return out

    def _splice(self, acc, g, rel, i, u, dry=False):
        """Replace sigma~ T(y) sigma~ by T(a) sigma~ M sigma~ T(c) using a four-term relation."""
        F = self.F
        g, rel = self._rotate_to(g, rel, i)
        if not dry:
            acc, g, rel = self._push_front_diag(acc, g, rel)
        else:
            u0, y0 = _split(rel[0])
            if u0 != 1:
                D = _diag(F, u0)
                g = g * D.inv()
                rel = [T(F, y0)] + rel[1:-1] + [rel[-1] * D.inv()]
        y = _split(rel[0])[1]
        a = (1 - u) / (u * y)
        c = (u - 1) / y
        M = T(F, u * y) * GammaElt((u, 0, 0, u.inverse()), F)
        s = self.G.sigma
        if not (s * T(F, y) * s == T(F, a) * s * M * s * T(F, c)):
            raise AssertionError("four-term splice identity failed")
        if not dry:
            sub = [T(F, y), T(F, -c), M.inv(), T(F, -a)]
            acc = acc + self.reduce(sub).lmul(g)
            self._log("splice", len(rel))
        g = g * T(F, a)
        rel = [M, T(F, c) * rel[1]] + rel[2:-1] + [rel[-1] * T(F, a)]
        return acc, g, rel

    def _log(self, rule, m):
        if self.trace is not None:
            self.trace.append((rule, m))

    # -- closed forms (used as independent checks) ---------------------------
    def three_term(self, p1, p2, p3):
        """The closed form for a three-term relation sigma~ p1~ sigma~ p2~ sigma~ p3~."""
        F = self.F
        if not _eval_blocks(F, [p1, p2, p3]).is_identity():
            raise NotARelation("not a three-term relation")
        u1, x1 = p_normalize(p1)
        u2, x2 = p_normalize(p2)
        u3, x3 = p_normalize(p3)
        out = self.b_unit(x1 * u1.inverse()).lmul(_diag(F, u1.inverse()))
        out.iadd(self.two_term_diag(_diag(F, u1)))
        h = GammaElt((u3.inverse(), -u3.inverse() * x3, 0, 1), F) * self.G.sigma
        out.iadd(self.two_term_diag(_diag(F, u2)).lmul(h))
        return out

    def b_closed_form(self, t):
        """B(t) by the closed-form recursions in -t, eps*t and t^-1 (independent of b_unit)."""
        F = self.F
        t = F.coerce(t)
        s, k = F.unit_log(t)
        sig, nu = self.G.sigma, self.G.nu
        if s == 1 and k == 0:
            return Lin.B(F)
        if s == -1:
            t0 = -t
            Dt = GammaElt((t0, 0, 0, t0.inverse()), F)
            Dti = Dt.inv()
            return (-self.b_closed_form(t0).lmul(sig * Dt)) - self._two_general(Dti).lmul(Dti)
        if k > 0:
            t0 = t * F.eps.inverse()
            out = self.b_closed_form(t0).lmul(nu.inv())
            bracket = Lin({identity(F): 1}, {})
            bracket.iadd(Lin({sig * T(F, t) * sig * T(F, t.inverse()): 1}, {}))
            bracket.iadd(Lin({sig * T(F, t) * sig: -1}, {}))
            return out + bracket
        # k < 0: B(t) = sigma T(t) B(t^-1) + phi((sigma~ D_t~)^2)
        Dt = GammaElt((t, 0, 0, t.inverse()), F)
        return self.b_closed_form(t.inverse()).lmul(sig * T(F, t)) + self._two_general(Dt)

    def _two_general(self, D):
        u, y = p_normalize(D)
        return self.two_term(_eps_exp(self.F, u))

    def four_term_value(self, x, u):
        """phi({x, u}_4) via the engine (x | u - 1)."""
        F = self.F
        x, u = F.coerce(x), F.coerce(u)
        if not ((u - 1) / x).is_integral():
            raise DivisibilityViolated("%r does not divide %r - 1" % (x, u))
        a = (1 - u) / x
        b = -x / u
        c = -u * (1 - u) / x
        D = GammaElt((u.inverse(), 0, 0, u), F)
        blocks = [T(F, a), T(F, b), T(F, c), D * T(F, x)]
        return self.reduce(blocks).lmul(T(F, x))

    def four_term_shift(self, x, u, e):
        """Right-hand side of the quantitative {x, u^e}_4 identity.

        Expresses phi({x, u^e}_4) through phi({x, u}_4), phi({-u^(e-2) x, u^(e-1)}_4)
        and two-term values.
        """
        F = self.F
        x, u = F.coerce(x), F.coerce(u)
        if not ((u - 1) / x).is_integral():
            raise DivisibilityViolated("%r does not divide %r - 1" % (x, u))
        sig = self.G.sigma
        ue = u ** e
        ui = u.inverse()
        P = GammaElt((ui, u ** (1 - e) * (1 - ue) / x, 0, u), F)
        out = self.four_term_value(x, u)
        shifted = self.four_term_value(-(u ** (e - 2)) * x, u ** (e - 1))
        out.iadd(shifted.lmul(sig * P * sig * T(F, u ** (e - 2) * x)))
        D1 = GammaElt((u ** (1 - e), 0, 0, u ** (e - 1)), F)
        out.iadd(self._two_general(D1).lmul(sig * P * sig), -1)
        De = GammaElt((u ** (-e), 0, 0, ue), F)
        out.iadd(self._two_general(De).lmul(sig * De))
        Du = GammaElt((ui, 0, 0, u), F)
        out.iadd(self._two_general(Du).lmul(sig * Du), -1)
        return out


def unit_candidates(F, K=6):
    out = []
    for k in range(-K, K + 1):
        e = F.eps_pow(k)
        out.append(e)
        out.append(-e)
    return out


def _eval_blocks(F, blocks):
    s = generators(F).sigma
    r = identity(F)
    for p in blocks:
        r = r * s * p
    return r


def _blocks_of(F, syl):
    """Rotate a syllable list to sigma~ p1~ ... sigma~ pm~: returns (P0, blocks)
    with phi(word) = P0.phi(blocks), or (identity, None) without sigma~."""
    if "s" not in syl:
        return identity(F), None
    syl = list(syl)
    lead = identity(F)
    while syl[0] != "s":
        lead = lead * syl.pop(0)
    blocks = []
    cur = identity(F)
    for x in syl[1:]:
        if x == "s":
            blocks.append(cur)
            cur = identity(F)
        else:
            cur = cur * x
    blocks.append(cur * lead)
    return lead, blocks


def word_syllables(word, F):
    """Split a word into 's' letters and maximal parabolic blocks."""
    G = generators(F)
    out = []
    for x in word.letters:
        if abs(x) == SIG:
            out.append("s")
            continue
        h = (G.nu if abs(x) == NU else G.tau)
        h = h if x > 0 else h.inv()
        if out and out[-1] != "s":
            out[-1] = out[-1] * h
        else:
            out.append(h)
    return out


def blocks_word(blocks, F):
    """The free-group word sigma~ p1~ sigma~ p2~ ... for a block list."""
    from .modgroup import p_word
    w = Word()
    for p in blocks:
        w = w * Word([SIG]) * p_word(p)
    return w


_ENGINES = {}


def engine(F):
    e = _ENGINES.get(F.D)
    if e is None:
        e = _ENGINES[F.D] = Engine(F)
    return e


def two_term(F, n):
    return engine(F).two_term(n)


def b_of_unit(F, t):
    return engine(F).b_unit(t)


def reduce(F, blocks):
    return engine(F).reduce(blocks)
