"""Hecke charpoly over Q(sqrt13) in parallel weight 8, factored over Q.

Pass a number as the first argument to run the psi words on that many processes.
"""

import sys

import sympy

from hilbertcoh import WeightPair, compute_report, hecke_element, quad_field

jobs = int(sys.argv[1]) if len(sys.argv) > 1 else 1
F = quad_field(13)
rep = compute_report(F, WeightPair.from_k(8, 8), "plus", hecke_element(F, "4-sqrt13"), jobs=jobs)
x = sympy.Symbol("x")
print("dims", rep.dims)
print("T(4-sqrt13) charpoly:", sympy.factor(sympy.Poly(rep.charpoly, x).as_expr()))
for e in rep.eigenspaces:
    print("eigenspace", sympy.Poly(e["factor"], x).as_expr(), "with m_ref",
          e["ratios"][0]["m_ref"] if e["ratios"] else None)
