"""Independent routes used by the tests.

Fox: phi on a relation word computed directly from a random 1-cocycle h on
the free group (phi = h restricted to the relation), without any reduction
rule.  The engine must reproduce it from h((s n)^2), h((s t)^3).

literal_B: the coboundary spaces B_A^+ / B_A^- as the image of the full
linear systems in (S, T, U) (every relation of the presentation that the
cochain must satisfy), solved by brute force with dense matrices.
"""

import random

from hilbertcoh.exact import FMat, kernel_f, rank_f
from hilbertcoh.modgroup import NU, SIG, TAU, Word, generators, identity
from hilbertcoh.relred import evaluate
from hilbertcoh.symrep import Action


class Fox:
    def __init__(self, F, w, mode, seed=1):
        rnd = random.Random(seed)
        self.F, self.w, self.mode = F, w, mode
        self.act = Action(w, F)
        G = generators(F)
        self.G = G
        n = w.dim

        def rv():
            return FMat.from_rows([[F.elt(rnd.randint(-5, 5), rnd.randint(-5, 5))] for _ in range(n)], F)

        wv = rv()
        v = rv()
        # h(sigma) in ker(1 + sigma) so that phi(sigma~^2) = 0
        self.h = {SIG: v - self.ap(G.sigma, v), NU: self.ap(G.nu, wv) - wv,
                  TAU: self.ap(G.tau, wv) - wv}

    def ap(self, g, V):
        return self.act.apply(g.rows(), V, scalar=(g.chi() if self.mode == "minus" else None))

    def gen(self, x):
        G = self.G
        return {SIG: G.sigma, NU: G.nu, TAU: G.tau}[abs(x)]

    def value(self, word):
        F = self.F
        pref = identity(F)
        out = FMat.zeros(self.w.dim, 1, F)
        for x in word.letters:
            g = self.gen(x)
            if x > 0:
                out = out + self.ap(pref, self.h[x])
                pref = pref * g
            else:
                pref = pref * g.inv()
                out = out - self.ap(pref, self.h[-x])
        return out

    def matches(self, lin, word):
        A = self.value(Word.parse("snsn"))
        B = self.value(Word.parse("ststst"))
        got = evaluate(lin, self.w, self.F, self.mode, A, B)
        return (got - self.value(word)).is_zero()


def _mats(F, w):
    G = generators(F)
    act = Action(w, F)

    def m(g):
        return act.matrix(g.rows(), twist=True)

    I = FMat.identity(w.dim, F)
    return {
        "I": I, "s": m(G.sigma), "t": m(G.tau), "n": m(G.nu), "ni": m(G.nu.inv()),
        "d": m(G.delta),
    }


def literal_B_plus(F, w):
    """Span of (sn + 1)(sU + S) over (S, T, U) satisfying the parabolic relations, the
    fifth relation of the field, the torsion relations and the delta condition."""
    M = _mats(F, w)
    I, s, t, n, ni, d = M["I"], M["s"], M["t"], M["n"], M["ni"], M["d"]
    Z = FMat.zeros(w.dim, w.dim, F)
    ntn = n * t * ni
    c7 = (I + t * n - n - ntn, (t - I) * (I - ntn))
    if F.D == 5:
        c8 = (n * n - I - t * n, I + n - n * n * t * ni - t)
    else:
        # the D=13 form of the fifth relation
        q = I + ntn + ntn * ntn
        c8 = (n * n - t * q * n - I, (I - n * n * t * ni * ni) * (I + n) - t * q * (I - ntn))
    st = s * t
    P = st * st + st + I
    rows = [
        FMat.hstack([I + s, Z, Z]),
        FMat.hstack([P, P * s, Z]),
        FMat.hstack([Z, c7[0], c7[1]]),
        FMat.hstack([Z, c8[0], c8[1]]),
    ]
    img = FMat.hstack([s * n + I, Z, (s * n + I) * s])
    rows.append((d - I) * img)
    K = kernel_f(FMat.vstack(rows))
    return img * K


def literal_B_minus(F, w):
    """Span of (1 - sn)S + (n^-2 - s n^-1)U over the minus-part constraint system, eps1 = -1."""
    M = _mats(F, w)
    I, s, t, n, ni, d = M["I"], M["s"], M["t"], M["n"], M["ni"], M["d"]
    Z = FMat.zeros(w.dim, w.dim, F)
    e1 = -1
    ntn = n * t * ni
    ni2 = ni * ni
    a38 = ntn - I + (I - t) * n * e1
    b38 = ((I - t) * (ni - ni * t * ni2)).scale(e1)
    a39 = I + (t * n).scale(e1) - n * n
    b39 = (t * (ni - n * t * ni2)).scale(e1) - (I - n * n * t * ni2) * (I + ni.scale(e1))
    st = s * t
    P = st * st + st + I
    rows = [
        FMat.hstack([I + s, Z, Z]),
        FMat.hstack([P, P * s, Z]),
        FMat.hstack([Z, a38, b38]),
        FMat.hstack([Z, a39, b39]),
    ]
    img = FMat.hstack([I - s * n, Z, ni2 - s * ni])
    rows.append((d - I) * img)
    K = kernel_f(FMat.vstack(rows))
    return img * K


def same_span(X, Y):
    r = rank_f(X)
    return r == rank_f(Y) and r == rank_f(FMat.hstack([X, Y]))
