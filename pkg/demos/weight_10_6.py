"""One-dimensional space over Q(sqrt5): Hecke eigenvalue at 2 and the ratio R(7)/R(5)."""

from hilbertcoh import WeightPair, compute_report, hecke_element, quad_field
from hilbertcoh.cli import value_str

F = quad_field(5)
rep = compute_report(F, WeightPair.from_k(10, 6), "plus", hecke_element(F, "2"))
print("dims", rep.dims)
print("charpoly (leading first)", rep.charpoly)
for r in rep.eigenspaces[0]["ratios"]:
    print("R(%d)/R(%d) = %s" % (r["m"], r["m_ref"], value_str(r["value"])))
