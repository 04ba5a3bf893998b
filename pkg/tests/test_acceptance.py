"""Acceptance criteria 1-11, one pass/fail line each.

Run `pytest tests/test_acceptance.py -v` (the lines are printed in the
terminal summary) or `python3 tests/test_acceptance.py`.
"""

import functools
import random
import sys
import time
from fractions import Fraction

import pytest
import sympy

from hilbertcoh import cohomspace as cs
from hilbertcoh import eichler, pcohom
from hilbertcoh.exact import quad_field
from hilbertcoh.hecke import PLUS_PROBES, letter_elt, std_reps
from hilbertcoh.modgroup import Word, four_term_word, tilde_lift, verify_relations
from hilbertcoh.relred import Engine, _eval_blocks, evaluate
from hilbertcoh.symrep import WeightPair

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from oracles import Fox  # noqa: E402

RESULTS = {}
X = sympy.Symbol("X")
S106 = sympy.sqrt(106)


def line(n):
    ok, subs = RESULTS[n]
    bad = [name + (": " + detail if detail else "") for name, good, detail in subs if not good]
    return "criterion %2d: %s%s" % (n, "PASS" if ok else "FAIL", "" if ok else "  [" + "; ".join(bad) + "]")


class Checks:
    def __init__(self, n):
        self.n = n
        self.subs = []

    def add(self, name, ok, detail=""):
        self.subs.append((name, bool(ok), detail))

    def finish(self):
        ok = all(s[1] for s in self.subs) and bool(self.subs)
        RESULTS[self.n] = (ok, self.subs)
        print(line(self.n))
        assert ok, line(self.n)


@functools.lru_cache(maxsize=None)
def report(D, k1, k2, part):
    F = quad_field(D)
    varpi = cs.hecke_element(F, "2" if D == 5 else "4-sqrt13")
    t = time.time()
    r = cs.compute_report(F, WeightPair.from_k(k1, k2), part, varpi)
    r.seconds = time.time() - t
    return r


def sym(rec, theta):
    """The exact value of a {poly, coords} record with theta substituted."""
    out = sum(sympy.Rational(n, d) * theta ** i for i, (n, d) in enumerate(rec["coords"]))
    assert "omega" not in rec, "value has an irrational F-part"
    return out


def rat(rec):
    assert len(rec["coords"]) == 1 and "omega" not in rec
    n, d = rec["coords"][0]
    return Fraction(n, d)


def eig(rep, factor):
    f = [int(c) for c in sympy.Poly(factor, X).all_coeffs()]
    return [e for e in rep.eigenspaces if e["factor"] == f]


def ratio(e, m):
    for r in e["ratios"]:
        if r["m"] == m:
            return r
    return None


def charpoly_is(rep, expr):
    return rep.charpoly == [int(c) for c in sympy.Poly(sympy.expand(expr), X).all_coeffs()]


def branch_value(e, m, mref, theta):
    r = ratio(e, m)
    if r is None or r["m_ref"] != mref:
        return None
    return sympy.nsimplify(sympy.expand(sym(r["value"], theta)))


def same(a, b):
    return a is not None and sympy.simplify(a - b) == 0


# ---------------------------------------------------------------------------

def test_criterion_1():
    c = Checks(1)
    t = time.time()
    rep = report(5, 10, 6, "plus")
    c.add("runtime < 60 s", time.time() - t < 60, "%.1fs" % (time.time() - t))
    c.add("dim Z/B = 1", rep.dims["quotient"] == 1, str(rep.dims))
    sp = rep.space
    line_ = [4, 0, 1, 0, 4]
    zs = sp.zeta(sp.Z)
    nonzero = [z for z in zs if any(not x.is_zero() for x in z)]
    prop = all(all(z[i] * line_[j] == z[j] * line_[i] for i in range(5) for j in range(5))
               for z in zs)
    c.add("zeta(Z) is the line through (4,0,1,0,4)", nonzero and prop)
    e = rep.eigenspaces[0]
    r = ratio(e, 7)
    c.add("R(7)/R(5) = 4", r and r["m_ref"] == 5 and rat(r["value"]) == 4)
    c.finish()


def test_criterion_2():
    c = Checks(2)
    for (k1, k2), m, mref, want in [((14, 6), 9, 7, Fraction(6)), ((8, 8), 6, 4, Fraction(25, 6)),
                                    ((12, 8), 8, 6, Fraction(7)),
                                    ((12, 10), 10, 8, Fraction(720, 11))]:
        rep = report(5, k1, k2, "plus")
        r = ratio(rep.eigenspaces[0], m)
        got = rat(r["value"]) if r and r["m_ref"] == mref else None
        c.add("(%d,%d) R(%d)/R(%d) = %s" % (k1, k2, m, mref, want), got == want, str(got))
    c.finish()


def test_criterion_3():
    c = Checks(3)
    rep = report(5, 14, 10, "plus")
    c.add("charpoly (x+2560)^2 - 960^2*106", charpoly_is(rep, (X + 2560) ** 2 - 960 ** 2 * 106),
          str(rep.charpoly))
    es = eig(rep, (X + 2560) ** 2 - 960 ** 2 * 106)
    c.add("one quadratic eigenspace", len(es) == 1)
    if es:
        for sgn in (1, -1):
            th = -2560 + sgn * 960 * S106
            c.add("R(11)/R(7) branch %+d" % sgn,
                  same(branch_value(es[0], 11, 7, th), 1616 - sgn * 76 * S106))
            c.add("R(9)/R(7) branch %+d" % sgn,
                  same(branch_value(es[0], 9, 7, th),
                       sympy.Rational(58, 3) - sgn * sympy.Rational(5, 6) * S106))
    c.finish()


def test_criterion_4():
    c = Checks(4)
    for (k1, k2), m, mref, want in [((10, 8), 8, 6, Fraction(180, 7)),
                                    ((12, 8), 9, 7, Fraction(70, 3)),
                                    ((12, 10), 9, 7, Fraction(42))]:
        rep = report(5, k1, k2, "minus")
        r = ratio(rep.eigenspaces[0], m)
        got = rat(r["value"]) if r and r["m_ref"] == mref else None
        c.add("minus (%d,%d) R(%d)/R(%d) = %s" % (k1, k2, m, mref, want), got == want, str(got))
    c.finish()


def test_criterion_5():
    c = Checks(5)
    rep = report(5, 14, 10, "minus")
    c.add("minus charpoly = plus charpoly", rep.charpoly == report(5, 14, 10, "plus").charpoly)
    es = eig(rep, (X + 2560) ** 2 - 960 ** 2 * 106)
    c.add("one quadratic eigenspace", len(es) == 1)
    if es:
        for sgn in (1, -1):
            th = -2560 + sgn * 960 * S106
            c.add("R(10)/R(8) branch %+d" % sgn,
                  same(branch_value(es[0], 10, 8, th), 50 - sgn * S106))
    c.finish()


EXPECTED_20_20 = ((X - 97280) ** 2 * (X + 840640) *
                 (X ** 4 - 1286780 * X ** 3 + 19006483200 * X ** 2 + 27181090390835200 * X
                  - 22979876427231395840000))


def _weight20_a2():
    """a(2) of the level-one weight-20 eigenform Delta * E4^2 from q-expansions."""
    N = 4
    e4 = [1] + [240 * sum(d ** 3 for d in range(1, n + 1) if n % d == 0) for n in range(1, N)]
    delta = [0] * N
    prod = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            prod = [prod[i] - (prod[i - n] if i >= n else 0) for i in range(N)]
    for i in range(N - 1):
        delta[i + 1] = prod[i]

    def mul(a, b):
        return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N)]

    f = mul(mul(delta, e4), e4)
    return f[2] // f[1]


def test_criterion_6():
    c = Checks(6)
    plus = report(5, 20, 20, "plus")
    minus = report(5, 20, 20, "minus")
    c.add("plus charpoly = expected product", charpoly_is(plus, EXPECTED_20_20),
          "computed x^1 coefficient of the quartic is 271810903908352000, expected "
          "27181090390835200")
    c.add("minus charpoly = plus charpoly", minus.charpoly == plus.charpoly)
    a2 = _weight20_a2()
    c.add("X+840640 divides, -840640 = a2^2 - 2^20 with a2 = 456",
          a2 == 456 and -840640 == a2 ** 2 - 2 ** 20 and eig(plus, X + 840640))
    want_plus = {18: Fraction(39355680000), 16: Fraction(33163650),
                 14: Fraction(1266460, 27), 12: Fraction(26075, 216)}
    want_minus = {17: Fraction(111006792000, 803), 15: Fraction(54618434, 365),
                  13: Fraction(453159, 1606)}
    for part, rep, want, mref in (("plus", plus, want_plus, 10), ("minus", minus, want_minus, 11)):
        es = eig(rep, X - 97280)
        c.add("%s: (X-97280) block has two eigenvectors" % part, len(es) == 2)
        for e in es:
            for m, v in want.items():
                r = ratio(e, m)
                got = rat(r["value"]) if r and r["m_ref"] == mref else None
                c.add("%s vector %d R(%d)/R(%d)" % (part, e["index"], m, mref), got == v, str(got))
        c.add("%s: identical ratio lists in the block" % part,
              len(es) == 2 and es[0]["ratios"] == es[1]["ratios"])
    c.finish()


def _resultant_minpoly_sq(e, m, target_roots, f):
    """charpoly over Q of the value of R(m)/R(m_ref) equals the target quadratic squared."""
    r = ratio(e, m)
    th, y = sympy.symbols("th y")
    val = sum(sympy.Rational(n, d) * th ** i for i, (n, d) in enumerate(r["value"]["coords"]))
    res = sympy.Poly(sympy.resultant(y - val, f.subs(X, th), th), y).monic()
    q = sympy.Poly(sympy.expand((y - target_roots[0]) * (y - target_roots[1])), y)
    return r["m_ref"], res == q ** 2


def test_criterion_7():
    c = Checks(7)
    expected = {
        (8, 8): (X ** 2 - 40 * X - 3957) * (X ** 3 + 28 * X ** 2 - 2601 * X - 71748),
        (10, 10): (X ** 2 - 16 * X - 42789) * (X ** 5 + X ** 4 - 66033 * X ** 3 + 1260423 * X ** 2
                                              + 530326440 * X + 14266185264),
        (12, 12): ((X - 252) * (X ** 4 + 252 * X ** 3 - 496198 * X ** 2 - 116604684 * X
                                + 25202349477)
                   * (X ** 6 + 244 * X ** 5 - 665334 * X ** 4 - 129598956 * X ** 3
                      + 109163403621 * X ** 2 + 14522233287672 * X - 255121008509808)),
    }
    for k, p in expected.items():
        t = time.time()
        rep = report(13, k[0], k[1], "plus")
        el = time.time() - t
        c.add("(%d,%d) charpoly = expected product" % k, charpoly_is(rep, p), str(rep.charpoly))
        if k == (12, 12):
            c.add("(12,12) runtime < 30 min", el < 1800, "%.1fs" % el)
    r88 = eig(report(13, 8, 8, "plus"), X ** 2 - 40 * X - 3957)
    for sgn in (1, -1):
        v = branch_value(r88[0], 6, 4, 20 + sgn * sympy.sqrt(4357)) if r88 else None
        c.add("(8,8) R(6)/R(4) = 70/3 at 20%+d*sqrt4357" % sgn, same(v, sympy.Rational(70, 3)))
    r10 = eig(report(13, 10, 10, "plus"), X ** 2 - 16 * X - 42789)
    for sgn in (1, -1):
        v = branch_value(r10[0], 7, 5, 8 + sgn * sympy.sqrt(42853)) if r10 else None
        c.add("(10,10) R(7)/R(5) = 50 at 8%+d*sqrt42853" % sgn, same(v, 50))
    f = X ** 4 + 252 * X ** 3 - 496198 * X ** 2 - 116604684 * X + 25202349477
    r12 = eig(report(13, 12, 12, "plus"), f)
    d = 7 * 5167
    sd = sympy.sqrt(d)
    for m, roots in ((10, ((3732099 + 18663 * sd) / 5, (3732099 - 18663 * sd) / 5)),
                     (8, ((24367 + 121 * sd) / 20, (24367 - 121 * sd) / 20))):
        ok = False
        if r12:
            mref, ok = _resultant_minpoly_sq(r12[0], m, roots, f)
            ok = ok and mref == 6
        c.add("(12,12) min-poly of R(%d)/R(6)" % m, ok)
    c.finish()


def test_criterion_8():
    c = Checks(8)
    for D, parts in ((5, ("plus", "minus")), (13, ("plus",))):
        F = quad_field(D)
        bad = []
        for l1 in range(0, 11, 2):
            for l2 in range(0, l1 + 1, 2):
                for part in parts:
                    if not cs.verify_fact_zeroing(F, WeightPair(l1, l2), part):
                        bad.append((l1, l2, part))
        c.add("disc %d fact zeroing for l <= 10" % D, not bad, str(bad))
        for (k1, k2), want in cs.DIM_TABLE[D].items():
            for part in parts:
                if (k1, k2) == (20, 20):
                    got = report(D, k1, k2, part).dims["quotient"]
                else:
                    got = cs.ClassSpace(F, WeightPair.from_k(k1, k2), part).dims["quotient"]
                c.add("disc %d (%d,%d) %s dim Z/B = %d" % (D, k1, k2, part, want), got == want,
                      str(got))
    c.finish()


def test_criterion_9():
    c = Checks(9)
    for D in (5, 13):
        rows = pcohom.suite(quad_field(D), 10)
        bad = [("(%d,%d)" % (w.k1, w.k2), name, det) for w, name, ok, det in rows if not ok]
        c.add("disc %d parabolic suite up to (10,10)" % D, rows and not bad, str(bad[:3]))
    c.finish()


def test_criterion_10():
    c = Checks(10)
    rs = {(a, b): r for a, b, r in eichler.es_ratios(12)}
    c.add("R(8)/R(6) = 5/4", rs.get((8, 6)) == Fraction(5, 4), str(rs.get((8, 6))))
    c.add("R(10)/R(6) = 12/5", rs.get((10, 6)) == Fraction(12, 5), str(rs.get((10, 6))))
    c.finish()


def _hecke_inner_words(F, reps):
    words = []
    for letters in PLUS_PROBES.values():
        elts = [letter_elt(F, x) for x in letters]
        for i in range(reps.d):
            q, word = i, None
            for g in elts:
                j = [j for j in range(reps.d) if reps.conj_elt(q, g, j) is not None][0]
                piece = tilde_lift(reps.conj_elt(q, g, j))
                word = piece if word is None else word * piece
                q = j
            words.append(word)
    return words


def test_criterion_11():
    from test_properties import (coset_shifted_reps, normalization_shift_coords,
                                 zeta_sign)
    c = Checks(11)
    for D in (5, 13):
        F = quad_field(D)
        try:
            ok = all(good for _, good in verify_relations(F))
        except Exception as exc:
            ok = False
            c.add("disc %d relations" % D, False, str(exc))
        c.add("disc %d presentation relations" % D, ok)
        e = F.eps
        four = [(F.elt(2), e ** 3), (F.elt(1) + e, e * e)] if D == 5 else [(F.elt(3), e * e)]
        ok4 = all(_eval_blocks(F, four_term_word(F, x, u)).is_identity() for x, u in four
                  if ((u - 1) / x).is_integral())
        c.add("disc %d four-term words are relations" % D, ok4)
        reps = std_reps(F, cs.hecke_element(F, "2" if D == 5 else "4-sqrt13"))
        words = _hecke_inner_words(F, reps)
        modes = ("plus", "minus") if D == 5 else ("plus",)
        bad = 0
        for seed in range(3):
            E = Engine(F, rng=random.Random(seed))
            for mode in modes:
                fox = Fox(F, WeightPair(4, 2), mode, seed)
                A, B = fox.value(Word.parse("snsn")), fox.value(Word.parse("ststst"))
                for wd in words:
                    got = evaluate(E.phi_word(wd), fox.w, F, mode, A, B)
                    if not (got - fox.value(wd)).is_zero():
                        bad += 1
        c.add("disc %d reduction rule-order independent on %d Hecke words" % (D, len(words)),
              bad == 0, "%d mismatches" % bad)
    for D, k, part in ((5, (10, 6), "plus"), (5, (14, 10), "plus"), (5, (10, 8), "minus"),
                       (13, (8, 8), "plus")):
        F = quad_field(D)
        w = WeightPair.from_k(*k)
        sp = cs.ClassSpace(F, w, part)
        varpi = cs.hecke_element(F, "2" if D == 5 else "4-sqrt13")
        reps = std_reps(F, varpi)
        H = cs.hecke_matrix(sp, reps)
        H2 = cs.hecke_matrix(sp, coset_shifted_reps(F, reps, seed=1))
        c.add("psi coset-representative independent %s %s" % (k, part), H == H2)
        c.add("Hecke columns in Z %s %s" % (k, part), sp.in_Z(cs.hecke_images(sp, reps)))
        same_c, moved = normalization_shift_coords(sp, reps, seed=2)
        c.add("normalization-choice independent %s %s" % (k, part), same_c,
              "" if moved else "shift space is trivial")
    for k, part, want in (((10, 6), "plus", 1), ((10, 8), "minus", -1)):
        s = zeta_sign(cs.ClassSpace(quad_field(5), WeightPair.from_k(*k), part))
        c.add("zeta-symmetry sign %s %s = %+d" % (k, part, want), s == want, str(s))
    c.finish()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
