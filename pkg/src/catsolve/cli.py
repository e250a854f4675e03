"""Command-line front end: load DSL system files, run the series /
kernel / solve pipelines, and emit canonical text or JSON reports.

Exit codes: 0 success (solve: certified output), 1 parse or I/O error,
2 budget exhausted, 3 non-generic system with deformation disabled.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from .dde import parse_dde, normalize, deform
from .fields import rat_str
from .groebner import GBBudget, GBBudgetExceeded
from .kernel import KernelSystem, duplicate, genericity_check, solve
from .puiseux import puiseux_roots
from .series import solve_series, specialize, eval_at_series

SCHEMA = 1


def _rat(q):
    return rat_str(mpq(q))


def _dim_dict(res):
    if res is None:
        return None
    if res.is_zero_dimensional:
        return {"kind": "ZeroDimensional", "degree": res.degree}
    return {"kind": "PositiveDimensional",
            "witness": sorted(res.witness) if res.witness else []}


def _deformation_dict(params):
    if params is None:
        return None
    return {
        "alpha": params.alpha,
        "beta": params.beta,
        "gamma": params.gamma,
        "epsilon": _rat(params.epsilon) if params.epsilon is not None else None,
    }


def _root_dict(r):
    return {
        "terms": [[str(e), str(c)] for e, c in r.terms],
        "multiplicity": r.multiplicity,
        "conjugates": r.conjugates,
        "status": r.status,
    }


def _puiseux_dict(rep):
    return {
        "degree": rep.degree,
        "found": rep.found(),
        "distinct_nonzero": rep.distinct_nonzero(),
        "excluded_negative": rep.excluded_negative,
        "status": rep.status,
        "certified": rep.certified,
        "roots": [_root_dict(r) for r in rep.roots],
        "messages": list(rep.messages),
    }


def _emit(report, path, stream):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        stream.write(text)


def _z_binding(sys, N):
    """Series solution plus the catalytic-point specializations: binds
    x_i to F_i(t, u) and z_j to the j-th derived specialization."""
    sol = solve_series(sys, N)
    k = max(sys.k, 1)
    bind = {}
    for i in range(sys.n):
        bind["x%d" % (i + 1)] = sol[i]
        for l in range(k):
            bind["z%d" % (k * i + l)] = specialize(sol[i], sys.a, l)
    return sol, bind


def cmd_series(args, out):
    sys_ = parse_dde(open(args.file).read())
    N = args.order or 16
    if N < 4:
        raise ValueError("series order must be at least 4")
    sol = solve_series(sys_, N)
    report = {"schema": SCHEMA, "command": "series", "order": N,
              "series": {}, "specializations": {}}
    for i, s in enumerate(sol):
        report["series"][sys_.names[i]] = s.to_str()
    if sys_.k >= 1:
        for i in range(sys_.n):
            for l in range(sys_.k):
                j = sys_.k * i + l
                report["specializations"]["z%d" % j] = \
                    specialize(sol[i], sys_.a, l).to_str()
    if args.json is not None or args.format == "json":
        _emit(report, args.json, out)
    if args.format == "text":
        for name, s in report["series"].items():
            out.write("%s = %s + O(t^%d)\n" % (name, s, N))
        for zname, s in report["specializations"].items():
            out.write("%s = %s + O(t^%d)\n" % (zname, s, N))
    return 0


def cmd_analyze(args, out):
    sys_ = parse_dde(open(args.file).read())
    if sys_.k < 1:
        raise ValueError("system has no discrete derivatives; "
                         "only the series command applies")
    N = args.order or 12
    budget = GBBudget(args.budget_pairs, args.budget_seconds)
    report = {"schema": SCHEMA, "command": "analyze",
              "n": sys_.n, "k": sys_.k, "a": _rat(sys_.a)}
    dparams = None
    if args.deform == "on":
        sys_, dparams = deform(sys_, mpq(args.epsilon))
        ns = normalize(sys_, "deformation_ready")
    else:
        ns = normalize(sys_, "minimal")
    ks = KernelSystem(ns)
    report["m"] = list(ns.m)
    report["M"] = ns.M
    report["det"] = ks.det.to_str()
    report["p"] = ks.p.to_str()
    report["deformation"] = _deformation_dict(dparams)

    _, bind = _z_binding(sys_, N)
    curve = eval_at_series(ks.det, bind, N)
    report["puiseux"] = _puiseux_dict(puiseux_roots(curve, prec=2))

    code = 0
    try:
        res = genericity_check(duplicate(ks), budget)
        report["genericity"] = _dim_dict(res)
    except GBBudgetExceeded as e:
        report["genericity"] = None
        report["budget_error"] = str(e)
        code = 2

    if args.json is not None or args.format == "json":
        _emit(report, args.json, out)
    if args.format == "text":
        out.write("n=%d k=%d M=%d m=%s\n" % (sys_.n, sys_.k, ns.M, ns.m))
        out.write("Det = %s\n" % report["det"])
        out.write("P = %s\n" % report["p"])
        if dparams is not None:
            out.write("deformation: alpha=%d beta=%d gamma=%s\n"
                      % (dparams.alpha, dparams.beta, dparams.gamma))
        pz = report["puiseux"]
        out.write("kernel curve: %d/%d roots, %d distinct nonzero, %s\n"
                  % (pz["found"], pz["degree"], pz["distinct_nonzero"],
                     pz["status"]))
        g = report["genericity"]
        if g is None:
            out.write("genericity: budget exhausted\n")
        elif g["kind"] == "ZeroDimensional":
            out.write("genericity: zero-dimensional, degree %d\n"
                      % g["degree"])
        else:
            out.write("genericity: positive-dimensional, witness %s\n"
                      % (g["witness"],))
    return code


def cmd_solve(args, out):
    sys_ = parse_dde(open(args.file).read())
    if sys_.k < 1:
        raise ValueError("system has no discrete derivatives; "
                         "only the series command applies")
    budget = GBBudget(args.budget_pairs, args.budget_seconds)
    rep = solve(sys_, order=args.order, target=args.target,
                deform_mode=args.deform, epsilon=mpq(args.epsilon),
                budget=budget)
    report = {
        "schema": SCHEMA,
        "command": "solve",
        "system": {"n": sys_.n, "k": sys_.k, "a": _rat(sys_.a),
                   "unknowns": list(sys_.names)},
        "target": rep.target,
        "order": rep.order,
        "genericity": _dim_dict(rep.genericity),
        "genericity_deformed": _dim_dict(rep.genericity_deformed),
        "deformation_used": rep.deformation_used,
        "deformation": _deformation_dict(rep.deformation),
        "eliminant": rep.eliminant.to_str() if rep.eliminant else None,
        "candidate": rep.candidate.poly.to_str() if rep.candidate else None,
        "minimal": rep.minimal.to_str() if rep.minimal else None,
        "certificate": rep.certificate,
        "budget_error": rep.budget_error,
        "messages": list(rep.messages),
        "timings": dict(rep.counters),
    }
    if args.json is not None or args.format == "json":
        _emit(report, args.json, out)
    if args.format == "text":
        out.write("target: %s\n" % rep.target)
        g = report["genericity"]
        if g is not None:
            out.write("genericity: %s\n"
                      % (("zero-dimensional, degree %d" % g["degree"])
                         if g["kind"] == "ZeroDimensional"
                         else "positive-dimensional, witness %s"
                         % (g["witness"],)))
        if rep.deformation_used:
            out.write("deformation: alpha=%d beta=%d epsilon=%s\n"
                      % (rep.deformation.alpha, rep.deformation.beta,
                         _rat(rep.deformation.epsilon)))
        if rep.eliminant is not None:
            out.write("eliminant = %s\n" % rep.eliminant.to_str())
        if rep.candidate is not None:
            out.write("candidate = %s\n" % rep.candidate.poly.to_str())
        out.write("certificate: %s\n" % rep.certificate)
        for msg in rep.messages:
            out.write("note: %s\n" % msg)
        if rep.budget_error:
            out.write("budget: %s\n" % rep.budget_error)
    return rep.exit_code


def build_parser():
    ap = argparse.ArgumentParser(
        prog="catsolve",
        description="Exact solver for systems of discrete differential "
                    "equations with one catalytic variable.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("solve", cmd_solve), ("series", cmd_series),
                     ("analyze", cmd_analyze)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--order", type=int, default=None,
                       help="series truncation order")
        p.add_argument("--target", default="z0",
                       help="specialized unknown to annihilate (solve)")
        p.add_argument("--deform", choices=("off", "on", "auto"),
                       default="auto")
        p.add_argument("--epsilon", default="1",
                       help="deformation parameter, a rational like 1/2")
        p.add_argument("--json", default=None, metavar="OUT",
                       help="write the JSON report to this path")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--budget-pairs", type=int, default=200_000)
        p.add_argument("--budget-seconds", type=float, default=600.0)
        p.set_defaults(fn=fn)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.budget_pairs <= 0 or args.budget_seconds <= 0:
        print("error: budgets must be positive", file=sys.stderr)
        return 1
    try:
        return args.fn(args, sys.stdout)
    except GBBudgetExceeded as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
