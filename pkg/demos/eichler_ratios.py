"""Period ratios of the cusp forms of level one from the torsion relations alone."""

from hilbertcoh import eichler

for k in (12, 16, 18, 20, 22, 26):
    try:
        rows = eichler.es_ratios(k)
    except eichler.MultiplicityTooHigh:
        print("weight %d: more than one cusp form, skipped" % k)
        continue
    print("weight %d:" % k, ", ".join("R(%d)/R(%d)=%s" % r for r in rows))
