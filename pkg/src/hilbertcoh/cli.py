"""Command line: compute ratio reports, run verification suites, the SL(2, Z) warm-up.

Exit codes: 0 success, 1 hard error (including usage errors), 2 when the
characteristic polynomial could not be fully factored (a partial report is
still printed; the missing factors may be supplied with --factor).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import cohomspace as cs
from . import eichler, pcohom
from .errors import HilbertCohError, MultiplicityTooHigh, UnsupportedConfiguration
from .exact import Poly, quad_field
from .modgroup import verify_relations
from .symrep import WeightPair

SUITES = ("relations", "pcohom", "facts")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for partial reports
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


@dataclass
class RunConfig:
    disc: int
    weights: tuple
    part: str = "plus"
    hecke: str = "2"
    fmt: str = "json"
    factors: list = field(default_factory=list)
    verbose: int = 0
    jobs: int = 1
    factor_budget: int = 200000

    def validate(self):
        if self.disc not in (5, 13):
            raise UsageError("disc must be 5 or 13")
        k1, k2 = self.weights
        if k1 < k2:
            raise UsageError("weights must satisfy k1 >= k2")
        WeightPair.from_k(k1, k2)
        if self.part not in ("plus", "minus"):
            raise UsageError("part must be plus or minus")
        if self.part == "minus" and self.disc != 5:
            raise UnsupportedConfiguration("the minus part is implemented for disc 5 only")
        if self.fmt not in ("json", "tsv"):
            raise UsageError("format must be json or tsv")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        return self


def parse_weights(s):
    try:
        k1, k2 = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("weights look like 10,6")
    return k1, k2


def parse_factor(s):
    """'1,-40,-3957' (leading coefficient first) to a monic integer Poly."""
    try:
        c = [int(x) for x in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("factor coefficients are integers, leading first")
    if not c or c[0] != 1:
        raise argparse.ArgumentTypeError("factors must be monic")
    return Poly(list(reversed(c)))


# ---------------------------------------------------------------------------
# output

def dumps(report):
    """Deterministic JSON for a RatioReport."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=1) + "\n"


def loads(text):
    return cs.RatioReport.from_dict(json.loads(text))


def value_str(v):
    """Human-readable form of a {poly, coords} record, theta a root of poly."""
    def lin(coords, var):
        terms = []
        for i, (n, d) in enumerate(coords):
            q = Fraction(n, d)
            if q == 0:
                continue
            mono = "" if i == 0 else ("th" if i == 1 else "th^%d" % i)
            if mono and abs(q) == 1:
                terms.append(("-" if q < 0 else "+") + mono)
            else:
                terms.append("%+s%s" % (q if q < 0 else "+%s" % q, "*" + mono if mono else ""))
        s = "".join(terms).lstrip("+") or "0"
        return s if var is None else "(%s)*%s" % (s, var)

    s = lin(v["coords"], None)
    if "omega" in v:
        s += "+" + lin(v["omega"], "omega")
    return s


def tsv(report):
    lines = ["\t".join(("factor", "index", "m", "m_ref", "value"))]
    for e in report.eigenspaces:
        fac = ",".join(str(c) for c in e["factor"])
        for r in e["ratios"]:
            lines.append("\t".join((fac, str(e["index"]), str(r["m"]), str(r["m_ref"]),
                                    value_str(r["value"]))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands

def cmd_compute(cfg, out=None):
    """Returns (exit code, report)."""
    out = out or sys.stdout
    cfg.validate()
    F = quad_field(cfg.disc)
    w = WeightPair.from_k(*cfg.weights)
    varpi = cs.hecke_element(F, cfg.hecke)
    report = cs.compute_report(F, w, cfg.part, varpi, factors=cfg.factors or None,
                               jobs=cfg.jobs, budget=cfg.factor_budget)
    if cfg.verbose:
        sys.stderr.write("dims %s, charpoly %s\n" % (report.dims, report.charpoly))
    out.write(dumps(report) if cfg.fmt == "json" else tsv(report))
    if not report.complete:
        sys.stderr.write("characteristic polynomial not fully factored; remainder %s\n"
                         % (report.remainder,))
        return 2, report
    return 0, report


def _facts_rows(F, max_l, parts):
    rows = []
    for l1 in range(0, max_l + 1, 2):
        for l2 in range(0, l1 + 1, 2):
            w = WeightPair(l1, l2)
            for part in parts:
                ok = cs.verify_fact_zeroing(F, w, part)
                rows.append(("(%d,%d) %s" % (w.k1, w.k2, part), "fact_zeroing", ok, ""))
                want = cs.DIM_TABLE.get(F.D, {}).get((w.k1, w.k2))
                if want is not None:
                    got = cs.ClassSpace(F, w, part).dims["quotient"]
                    rows.append(("(%d,%d) %s" % (w.k1, w.k2, part), "dim Z/B = dim S", got == want,
                                 "%d vs %d" % (got, want)))
    return rows


def _suite_job(args):
    suite, disc, max_l = args
    F = quad_field(disc)
    if suite == "relations":
        return [("disc %d" % disc, name, ok, "") for name, ok in verify_relations(F)]
    if suite == "pcohom":
        return [("(%d,%d)" % (w.k1, w.k2), name, ok, "" if ok else detail)
                for w, name, ok, detail in pcohom.suite(F, max_l)]
    parts = ("plus", "minus") if disc == 5 else ("plus",)
    return _facts_rows(F, max_l, parts)


def run_suite(suite, discs, max_l, jobs=1):
    tasks = [(suite, d, max_l) for d in discs]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
            parts = list(ex.map(_suite_job, tasks))
    else:
        parts = [_suite_job(t) for t in tasks]
    return [r for p in parts for r in p]


def cmd_verify(suite, discs, max_l, fmt="text", jobs=1, out=None):
    out = out or sys.stdout
    if suite not in SUITES:
        raise UsageError("unknown suite %r" % suite)
    rows = run_suite(suite, discs, max_l, jobs)
    if fmt == "json":
        out.write(json.dumps([{"case": c, "check": n, "ok": ok, "detail": d}
                              for c, n, ok, d in rows], indent=1) + "\n")
    else:
        for c, n, ok, d in rows:
            out.write("%s\t%s\t%s%s\n" % ("PASS" if ok else "FAIL", c, n, "\t" + d if d else ""))
    bad = sum(1 for r in rows if not r[2])
    out.write("%d checks, %d failed\n" % (len(rows), bad) if fmt != "json" else "")
    return 1 if bad else 0


def cmd_eichler(k, out=None):
    out = out or sys.stdout
    if k % 2 or k < 4:
        raise UsageError("weight must be even and at least 4")
    rows = eichler.es_ratios(k)
    for a, b, r in rows:
        out.write("R(%d)/R(%d)\t%s\n" % (a, b, r))
    sym = eichler.symmetric_check(k)
    out.write("functional equation check\t%s\n" % ("pass" if sym else "FAIL"))
    return 0 if sym else 1


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="hilbertcoh", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = sub.add_parser("compute", help="Hecke charpoly and L-value ratios for one space")
    c.add_argument("--disc", type=int, required=True, choices=(5, 13))
    c.add_argument("--weights", type=parse_weights, required=True, help="k1,k2")
    c.add_argument("--part", default="plus", choices=("plus", "minus"))
    c.add_argument("--hecke", default=None,
                   help="totally positive prime element, e.g. 2 or 4-sqrt13 (default: 2 for "
                        "disc 5, 4-sqrt13 for disc 13)")
    c.add_argument("--format", dest="fmt", default="json", choices=("json", "tsv"))
    c.add_argument("--factor", dest="factors", type=parse_factor, action="append", default=[],
                   help="a charpoly factor, coefficients leading first; repeat for each factor")
    c.add_argument("--factor-budget", type=int, default=200000,
                   help="root-subset combinations tried before giving up on factoring")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("-v", "--verbose", action="count", default=0)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--disc", type=int, choices=(5, 13), action="append",
                   help="repeatable; default both fields")
    v.add_argument("--max-l", type=int, default=8)
    v.add_argument("--format", dest="fmt", default="text", choices=("text", "json"))
    v.add_argument("--jobs", type=int, default=1)
    e = sub.add_parser("eichler", help="period ratios for SL(2, Z) in weight k")
    e.add_argument("k", type=int)
    return p


def main(argv=None):
    p = build_parser()
    args = p.parse_args(argv)
    try:
        if args.cmd == "compute":
            hecke = args.hecke or ("2" if args.disc == 5 else "4-sqrt13")
            cfg = RunConfig(disc=args.disc, weights=args.weights, part=args.part, hecke=hecke,
                            fmt=args.fmt, factors=args.factors, verbose=args.verbose,
                            jobs=args.jobs, factor_budget=args.factor_budget)
            code, _ = cmd_compute(cfg)
            return code
        if args.cmd == "verify":
            return cmd_verify(args.suite, args.disc or [5, 13], args.max_l, args.fmt, args.jobs)
        return cmd_eichler(args.k)
    except (UsageError, ValueError) as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return 1
    except MultiplicityTooHigh as exc:
        sys.stderr.write("multiplicity too high: %s\n" % exc)
        return 1
    except HilbertCohError as exc:
        sys.stderr.write("%s: %s\n" % (type(exc).__name__, exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
