"""Two Galois-conjugate eigenforms in weight (14,10): ratios as a + b*sqrt(disc)."""

import sympy

from hilbertcoh import WeightPair, compute_report, hecke_element, quad_field

F = quad_field(5)
rep = compute_report(F, WeightPair.from_k(14, 10), "plus", hecke_element(F, "2"))
x = sympy.Symbol("x")
for e in rep.eigenspaces:
    poly = sympy.Poly(e["factor"], x)
    print("factor", poly.as_expr())
    for r in e["ratios"]:
        val = r["value"]
        if all(n == 0 for n, _ in val["coords"]):
            continue
        expr = sum(sympy.Rational(n, d) * x ** i for i, (n, d) in enumerate(val["coords"]))
        for root in sympy.roots(poly, x):
            print("  R(%d)/R(%d) = %s" % (r["m"], r["m_ref"],
                                          sympy.nsimplify(sympy.radsimp(expr.subs(x, root)))))
