"""Command-line surface: classification runs, per-point counts, region
sampling, symbolic verification, and brute-force oracle comparison.

Reports are deterministic for a fixed RunConfig (byte-identical JSON, keys
sorted); wall-clock timestamps go to a .meta.json sidecar next to each
report, never into the report itself.

Exit codes: 0 ok, 1 parse/usage error, 2 budget exhausted, 3 degenerate.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

from gmpy2 import mpq

from . import __version__
from .poly import (MultiPoly, PolyError, Q, VarContext, format_poly,
                   parse_poly, squarefree_part, poly_gcd)
from .matrix import PolyMatrix, resultant
from .groebner import BudgetExceeded, DEFAULT_BUDGET, radical_membership
from .detclass import DetProblem, classify
from .realcount import (cad2_samples, label_regions, region_report_csv,
                        region_report_doc, region_report_svg, solve_zero_dim)
from . import contrast

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_BUDGET = 2
EXIT_DEGENERATE = 3


class CliError(Exception):
    def __init__(self, msg, code=EXIT_PARSE):
        super().__init__(msg)
        self.code = code


# ---------------------------------------------------------------------------
# run configuration and report plumbing


class RunConfig:
    def __init__(self, args):
        self.seed = args.seed
        self.budget_steps = args.budget_steps
        self.budget_hours = args.budget_hours
        self.jobs = args.jobs
        self.out = args.out

    def to_doc(self):
        return {"seed": self.seed, "budget_steps": self.budget_steps,
                "budget_hours": self.budget_hours, "jobs": self.jobs,
                "version": __version__}


def write_report(cfg: RunConfig, name: str, doc, started, text=None):
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    if text is None:
        doc = dict(doc)
        doc["run_config"] = cfg.to_doc()
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    meta = {"report": name,
            "started": started.isoformat(),
            "finished": datetime.datetime.now(datetime.timezone.utc).isoformat()}
    with open(path + ".meta.json", "w") as fh:
        fh.write(json.dumps(meta, sort_keys=True) + "\n")
    return path


def _now():
    return datetime.datetime.now(datetime.timezone.utc)


# ---------------------------------------------------------------------------
# problem ingestion


def load_problem(path: str) -> DetProblem:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise CliError("cannot read problem file: %s" % e)
    except json.JSONDecodeError as e:
        raise CliError("problem file %s: line %d column %d: %s"
                       % (path, e.lineno, e.colno, e.msg))
    for field in ("k", "r0", "vars", "params", "matrix"):
        if field not in doc:
            raise CliError("problem file %s: missing field %r" % (path, field))
    names = list(doc["vars"]) + list(doc["params"])
    ctx = VarContext(names)
    try:
        rows = [[parse_poly(s, ctx) for s in row] for row in doc["matrix"]]
        cons = [parse_poly(s, ctx) for s in doc.get("constraints", [])]
    except PolyError as e:
        raise CliError("problem file %s: %s" % (path, e))
    M = PolyMatrix(rows)
    if M.rows != doc["k"]:
        raise CliError("problem file %s: matrix is %dx%d but k=%s"
                       % (path, M.rows, M.cols, doc["k"]))
    try:
        return DetProblem(M, doc["r0"], doc["vars"], doc["params"], cons,
                          name=os.path.basename(path))
    except PolyError as e:
        raise CliError("problem file %s: %s" % (path, e))


def builtin_problem(name: str) -> DetProblem:
    if name == "water":
        return contrast.singular_system(water=True)
    if name == "general":
        return contrast.singular_system(water=False)
    if name == "toy":
        return toy_problem()
    raise CliError("unknown builtin %r (choose water, general or toy)" % name)


def toy_problem() -> DetProblem:
    """k=2, r0=1, one parameter: M = [[x1, x2], [x3, x4 - G1]] with the unit
    sphere constraint.  Small enough for brute-force comparison."""
    ctx = VarContext(["x1", "x2", "x3", "x4", "G1"])
    M = PolyMatrix([[parse_poly("x1", ctx), parse_poly("x2", ctx)],
                    [parse_poly("x3", ctx), parse_poly("x4 - G1", ctx)]])
    h = parse_poly("x1^2 + x2^2 + x3^2 + x4^2 - 1", ctx)
    return DetProblem(M, 1, ["x1", "x2", "x3", "x4"], ["G1"], [h], name="toy")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig, args) -> int:
    started = _now()
    problem = (load_problem(args.problem) if args.problem
               else builtin_problem(args.builtin))
    try:
        out = classify(problem, seed=cfg.seed, budget=cfg.budget_steps)
    except BudgetExceeded as e:
        write_report(cfg, "classify.json",
                     {"status": "budget-exhausted", "detail": str(e),
                      "problem": problem.name}, started)
        print("budget exhausted: %s" % e, file=sys.stderr)
        return EXIT_BUDGET
    doc = json.loads(out.to_json())
    doc["problem"] = problem.name
    doc["f_table"] = {k: format_poly(v) for k, v in contrast.f_table().items()} \
        if problem.name == "water" else {}
    write_report(cfg, "classify.json", doc, started)
    if len(problem.param_names) == 2:
        _emit_region_reports(cfg, problem, out.squarefree, started)
    return EXIT_OK


def _emit_region_reports(cfg, problem, sep_poly, started):
    pctx = VarContext(problem.param_names)
    sep = sep_poly.in_context(pctx)
    dom_doc = []
    domain = []
    if problem.name == "water":
        domain = [parse_poly("g2", pctx), parse_poly("2*G2 - g2", pctx)]
        dom_doc = [format_poly(d) for d in domain]
    samples = cad2_samples([sep], domain=domain, labels=["product"],
                           abscissa=problem.param_names[-1])
    labels, conflicts = label_regions(problem.singular_equations(),
                                      problem.constraints, samples,
                                      problem.param_names, seed=cfg.seed,
                                      budget=cfg.budget_steps)
    counts = [labels[tuple(sorted(s.signs.items()))] for s in samples]
    doc = region_report_doc(samples, counts)
    doc["domain"] = dom_doc
    doc["conflicts"] = [repr(c[0]) for c in conflicts]
    write_report(cfg, "regions.json", doc, started)
    write_report(cfg, "regions.csv", None, started,
                 text=region_report_csv(samples, counts))
    write_report(cfg, "regions.svg", None, started,
                 text=region_report_svg(samples, counts, polys=[sep]))


def _parse_rat(s: str, what: str):
    try:
        return mpq(s)
    except (ValueError, ZeroDivisionError):
        raise CliError("cannot parse %s value %r as a rational" % (what, s))


def cmd_count(cfg: RunConfig, args) -> int:
    started = _now()
    if args.g2 is None or args.G2 is None:
        raise CliError("count needs --g2 and --G2")
    g2 = _parse_rat(args.g2, "--g2")
    G2 = _parse_rat(args.G2, "--G2")
    problem = builtin_problem(args.builtin or "water")
    assign = {"g2": g2, "G2": G2}
    assign = {k: v for k, v in assign.items() if k in problem.param_names}
    if set(assign) != set(problem.param_names):
        raise CliError("builtin %r needs values for parameters %s"
                       % (problem.name, problem.param_names))
    F = [p.specialize(assign) for p in problem.singular_equations()]
    H = [h.specialize(assign) for h in problem.constraints]
    rc = solve_zero_dim(F, H, seed=cfg.seed, budget=cfg.budget_steps)
    doc = rc.to_doc()
    doc["point"] = {k: str(v) for k, v in assign.items()}
    write_report(cfg, "count.json", doc, started)
    print(json.dumps({"count_total": rc.total, "count_in_B": rc.inside,
                      "count_interior": rc.interior,
                      "degenerate": rc.degenerate}, sort_keys=True))
    if rc.degenerate:
        print("degenerate fiber at this parameter point", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_samples(cfg: RunConfig, args) -> int:
    started = _now()
    src = args.from_classify or os.path.join(cfg.out, "classify.json")
    if not os.path.exists(src):
        raise CliError("no classify report at %s (run classify first or pass "
                       "--from-classify)" % src)
    with open(src) as fh:
        doc = json.load(fh)
    problem = builtin_problem(args.builtin or "water")
    pctx = VarContext(problem.param_names)
    sep = parse_poly(doc["squarefree"], pctx)
    domain = []
    if problem.name == "water":
        domain = [parse_poly("g2", pctx), parse_poly("2*G2 - g2", pctx)]
    samples = cad2_samples([sep], domain=domain, labels=["product"],
                           abscissa=problem.param_names[-1])
    out = {"samples": [s.to_doc() for s in samples]}
    write_report(cfg, "samples.json", out, started)
    print("%d samples" % len(samples))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    started = _now()
    target = args.target
    checks = {}
    if target == "matrix":
        M, D, Dp = contrast.build_M_and_D()
        R = contrast.reference_matrix()
        checks["matrix_entrywise"] = all(
            (M.entries[i][j] - R.entries[i][j]).is_zero()
            for i in range(4) for j in range(4))
    elif target == "f-table":
        ft = contrast.f_table()
        checks["f_table_count"] = len(ft) == 9
        o = contrast.param_context()
        expected = contrast.F_TABLE_TEXT
        for k, text in expected.items():
            checks[k] = (ft[k] - parse_poly(text, o)).is_zero()
    elif target == "appendix":
        rep = contrast.verify_intersection_parametrization()
        for k, v in rep.items():
            checks[k] = v if isinstance(v, bool) else str(v)
    elif target == "products":
        src = args.from_classify or os.path.join(cfg.out, "classify.json")
        if not os.path.exists(src):
            raise CliError("verify products needs a classify report (run "
                           "classify --builtin water first, or pass "
                           "--from-classify)")
        with open(src) as fh:
            doc = json.load(fh)
        checks.update(_verify_products(doc, cfg))
    else:
        raise CliError("unknown verify target %r" % target)
    ok = all(v is True for v in checks.values() if isinstance(v, bool))
    doc = {"target": target, "checks": checks, "ok": ok}
    write_report(cfg, "verify_%s.json" % target.replace("-", "_"), doc, started)
    for k in sorted(checks):
        print("%-40s %s" % (k, checks[k]))
    return EXIT_OK if ok else EXIT_PARSE


def _verify_products(doc, cfg) -> dict:
    """Both-way squarefree divisibility of each water branch against the
    expected factor products."""
    pctx = contrast.param_context()
    expected = contrast.expected_branch_products()
    by_id = {}
    for b in doc.get("branches", []):
        if b["status"] == "factor":
            key = b["id"].split("/")[0] if b["id"].startswith("rank") else b["id"]
            p = parse_poly(b["poly"], pctx)
            by_id[key] = by_id.get(key, pctx.one()) * p
    checks = {}
    for key, exp in expected.items():
        bkey = key.split("/")[0] if key.startswith("rank") else key
        got = by_id.get(bkey if bkey != "boundary" else key)
        if got is None:
            checks["%s_present" % key] = False
            continue
        gsf, esf = squarefree_part(got), squarefree_part(exp)
        checks["%s_expected_divides" % key] = esf.divides(gsf)
        checks["%s_computed_divides" % key] = gsf.divides(esf)
    return checks


def cmd_oracle(cfg: RunConfig, args) -> int:
    """Brute-force comparison on the toy problem: the pipeline's squarefree
    product must predict exactly where the fiber count changes, checked
    against resultant-based counting at grid parameter values."""
    started = _now()
    problem = toy_problem()
    out = classify(problem, seed=cfg.seed, budget=cfg.budget_steps)
    pctx = VarContext(problem.param_names)
    sep = out.squarefree.in_context(pctx)
    grid = [mpq(n, 8) for n in range(-12, 28, 2)]   # 20 values
    rows = []
    agree = True
    for gv in grid:
        rc = _toy_count(problem, gv, cfg)
        rows.append({"G1": str(gv), "count_in_B": rc})
    # counts must be locally constant between the roots of the product
    svals = [sep.eval({"G1": gv}) for gv in grid]
    for (a, ca, sa), (b, cb, sb) in zip(
            [(g, r["count_in_B"], s) for g, r, s in zip(grid, rows, svals)][:-1],
            [(g, r["count_in_B"], s) for g, r, s in zip(grid, rows, svals)][1:]):
        if ca != cb:
            # a change of count needs a root of the product in [a, b]
            from .realcount import sturm_count
            if sturm_count(sep, a, b, name="G1") == 0 and sa != 0:
                agree = False
    doc = {"grid": rows, "product": format_poly(sep), "agree": agree}
    write_report(cfg, "oracle.json", doc, started)
    print("oracle agreement:", agree)
    return EXIT_OK if agree else EXIT_PARSE


def _toy_count(problem, gv, cfg):
    F = [p.specialize({"G1": gv}) for p in problem.singular_equations()]
    H = [h.specialize({"G1": gv}) for h in problem.constraints]
    rc = solve_zero_dim(F, H, seed=cfg.seed, budget=cfg.budget_steps)
    return rc.inside


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    ap = argparse.ArgumentParser(
        prog="detsing",
        description="real singular-point classification for parametric "
                    "determinantal varieties")
    default_seed = int(os.environ.get("DETCLASS_SEED", "0"))
    ap.add_argument("--seed", type=int, default=default_seed)
    ap.add_argument("--budget-steps", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--budget-hours", type=float, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=".")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="run the three-branch classification")
    p.add_argument("--builtin", default=None)
    p.add_argument("--problem", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("count", help="count real singular points at a "
                                     "parameter point")
    p.add_argument("--builtin", default="water")
    p.add_argument("--g2", default=None)
    p.add_argument("--G2", default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("samples", help="emit open-CAD sample points for a "
                                       "classify product")
    p.add_argument("--builtin", default="water")
    p.add_argument("--from-classify", default=None)
    p.set_defaults(func=cmd_samples)

    p = sub.add_parser("verify", help="symbolic identity suites")
    p.add_argument("target", choices=["matrix", "f-table", "products",
                                      "appendix"])
    p.add_argument("--from-classify", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force comparison on the toy "
                                      "instance")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(args)
    if args.command == "classify" and not args.builtin and not args.problem:
        print("classify needs --builtin or --problem", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(cfg, args)
    except CliError as e:
        print(str(e), file=sys.stderr)
        return e.code
    except BudgetExceeded as e:
        print("budget exhausted: %s" % e, file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
