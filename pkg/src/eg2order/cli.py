"""Command-line interface.

Exit codes: 0 conclusive result, 1 input error, 2 crossing / inconclusive /
withheld conclusion.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from eg2order import __version__, cases
from eg2order.core import EG2Params, DomainError, cdf, hazard, pdf, reversed_hazard, survival
from eg2order.majorization import (
    apply_transforms,
    in_S_n,
    in_T_n,
    majorizes,
    prefix_sums,
    recover_t_transform_2x2,
    verify_chain_path,
)
from eg2order.orders import (
    DEFAULT_GRID,
    DEFAULT_TOL,
    GridSpec,
    Relation,
    compare_fr,
    compare_lr,
    compare_rf,
    compare_st,
    find_crossings,
)
from eg2order.scenario import RunRecord, ScenarioError, load_chain, load_scenario
from eg2order.systems import ComponentSet, SystemKind, evaluate

EXIT_OK, EXIT_INPUT, EXIT_OPEN = 0, 1, 2

CSV_COLUMNS = ("x", "F_A", "Fbar_A", "f_A", "rhaz_A", "F_B", "Fbar_B", "f_B", "rhaz_B", "diff_surv")


def fmt(v):
    """Shortest round-trip decimal for a float."""
    return repr(float(v))


def _stat(kind, n):
    return f"X_{{1:{n}}}" if SystemKind.parse(kind) is SystemKind.SERIES else f"X_{{{n}:{n}}}"


def describe(relation, order, kind, n):
    x = _stat(kind, n)
    y = x.replace("X_", "X*_")
    sym = {Relation.FIRST: ">=", Relation.SECOND: "<=", Relation.EQUAL: "="}.get(relation)
    if sym is None:
        return relation.value
    return f"{relation.value} ({x} {sym}_{order} {y})"


def write_grid_csv(path, A, B, kind, xs):
    ga, gb = evaluate(A, xs), evaluate(B, xs)
    cols = [xs, ga.cdf(kind), ga.sf(kind), ga.pdf(kind), np.exp(ga.log_rhazard(kind)),
            gb.cdf(kind), gb.sf(kind), gb.pdf(kind), np.exp(gb.log_rhazard(kind)),
            ga.sf(kind) - gb.sf(kind)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in zip(*cols):
            w.writerow([fmt(v) for v in row])


def _grid_from_args(args, base: GridSpec):
    d = base.to_dict()
    for key, attr in (("x_min", "grid_min"), ("x_max", "grid_max"),
                      ("count", "grid_points"), ("spacing", "spacing")):
        v = getattr(args, attr, None)
        if v is not None:
            d[key] = v
    try:
        return GridSpec(**d)
    except ValueError as exc:
        raise ScenarioError(f"grid: {exc}") from None


def _scenario_from_args(args):
    sc = load_scenario(args.scenario)
    grid = _grid_from_args(args, sc.grid)
    tol = args.tol if args.tol is not None else sc.tol
    if not tol > 0:
        raise ScenarioError("--tol must be > 0")
    return type(sc)(sc.A, sc.B, sc.kind, sc.order, grid, tol, sc.name)


def run_comparison(sc):
    if sc.order == "st":
        return compare_st(sc.A, sc.B, sc.kind, sc.grid, sc.tol)
    if sc.order == "fr":
        return compare_fr(sc.A, sc.B, sc.kind, sc.grid, sc.tol)
    if sc.order == "rf":
        return compare_rf(sc.A, sc.B, sc.grid, sc.tol, kind=sc.kind)
    return compare_lr(sc.A, sc.B, sc.kind, sc.grid, sc.tol)


def cmd_compare(args, out):
    sc = _scenario_from_args(args)
    if args.dump_normalized:
        out.write(sc.normalized_json())
        return EXIT_OK
    verdict = run_comparison(sc)
    g = sc.grid
    out.write(f"scenario: {sc.name or args.scenario}  digest {sc.digest()[:16]}\n")
    out.write(f"order: {sc.order}  kind: {sc.kind.value}  grid: {g.spacing.value} "
              f"[{fmt(g.x_min)}, {fmt(g.x_max)}] x {g.count}  tol {fmt(sc.tol)}\n")
    out.write(f"verdict: {describe(verdict.relation, sc.order, sc.kind, max(len(sc.A), len(sc.B)))}\n")
    out.write(f"max_violation: {fmt(verdict.max_violation)}\n")
    for lo, hi in verdict.crossings:
        out.write(f"crossing: [{fmt(lo)}, {fmt(hi)}]\n")
    if args.csv:
        write_grid_csv(args.csv, sc.A, sc.B, sc.kind, g.points())
    if args.record:
        rec = RunRecord.now(sc.digest(), verdict.relation.value, verdict.crossings)
        with open(args.record, "w") as fh:
            fh.write(rec.to_json())
    return EXIT_OK if verdict.relation.conclusive else EXIT_OPEN


def cmd_crossings(args, out):
    sc = _scenario_from_args(args)
    if args.dump_normalized:
        out.write(sc.normalized_json())
        return EXIT_OK
    xs = find_crossings(sc.A, sc.B, sc.kind, sc.grid, sc.tol)
    out.write(f"crossings: {len(xs)}\n")
    for x in xs:
        out.write(f"{fmt(x)}\n")
    if args.csv:
        write_grid_csv(args.csv, sc.A, sc.B, sc.kind, sc.grid.points())
    return EXIT_OK


def _check(out, ok, text):
    out.write(f"  [{'PASS' if ok else 'FAIL'}] {text}\n")
    return ok


def _reproduce_chain(case, grid, tol, out):
    X, Xs, t = case["X"], case["X*"], case["transform"]
    kind = SystemKind.parse(case["kind"])
    member = in_S_n if case["set"] == "S" else in_T_n
    set_name = f"{case['set']}_2"
    ok = True
    err = apply_transforms(Xs, [t]).max_abs_diff(X)
    ok &= _check(out, err < 1e-12, f"X* T(w={fmt(t.w)}) = X  (max entry error {err:.3g})")
    ok &= _check(out, member(X), f"X in {set_name}")
    ok &= _check(out, member(Xs), f"X* in {set_name}")
    w = recover_t_transform_2x2(Xs, X)
    ok &= _check(out, w is not None and abs(w - t.w) <= 1e-10, f"recovered w = {fmt(w) if w is not None else None}")
    A = ComponentSet.from_matrix(X, cases.DEFAULT_PHI)
    B = ComponentSet.from_matrix(Xs, cases.DEFAULT_PHI)
    v = compare_st(A, B, kind, grid, tol)
    # the majorizing system X* has the smaller series survival / larger parallel lifetime
    implied = Relation.FIRST if kind is SystemKind.SERIES else Relation.SECOND
    ok &= _check(out, v.relation is implied and not v.crossings,
                 f"st order implied by X* >> X: {describe(implied, 'st', kind, 2)}; "
                 f"grid verdict {v.relation.value}, max_violation {v.max_violation:.3g} (phi={fmt(cases.DEFAULT_PHI)})")
    stated = Relation.SECOND if "<=" in case["stated"] else Relation.FIRST
    if v.relation is stated:
        out.write(f"  [PASS] stated conclusion {case['stated']} holds on the grid\n")
    else:
        out.write(f"  [DISCREPANCY] stated conclusion {case['stated']} does not hold on the grid: "
                  f"the grid verdict is {describe(v.relation, 'st', kind, 2)}\n")
    return ok


def cmd_reproduce(args, out):
    grid = _grid_from_args(args, DEFAULT_GRID)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    ex = args.example
    out.write(f"example {ex}\n")
    if ex in ("3.3", "3.4"):
        case = cases.EX3_3 if ex == "3.3" else cases.EX3_4
        ok = _reproduce_chain(case, grid, tol, out)
        return EXIT_OK if ok else EXIT_OPEN
    c = cases.EX3_11
    A = ComponentSet.from_arrays(c["theta"], c["phi"], c["alpha"])
    B = ComponentSet.from_arrays(c["theta"], c["phi*"], c["alpha"])
    xs = find_crossings(A, B, c["kind"], grid, tol)
    ok = _check(out, bool(xs), f"parallel survival functions cross: {len(xs)} crossing(s)")
    for x in xs:
        out.write(f"    crossing at x = {fmt(x)}\n")
    maj = majorizes(c["phi"], c["phi*"])
    ps, pss = prefix_sums(c["phi"]), prefix_sums(c["phi*"])
    _check(out, maj, "phi majorizes phi*: prefix sums "
           f"{[round(float(v), 12) for v in ps]} vs {[round(float(v), 12) for v in pss]}")
    if args.csv:
        write_grid_csv(args.csv, A, B, c["kind"], grid.points())
    return EXIT_OK if ok else EXIT_OPEN


def cmd_chain(args, out):
    chain = load_chain(args.chain)
    rep = verify_chain_path(chain.start, chain.transforms, chain.target_set)
    n = chain.start.n
    out.write(f"start: alphas {list(chain.start.alphas)} thetas {list(chain.start.thetas)}  "
              f"in {chain.target_set}_{n}: {rep.start_member}\n")
    for k, step in enumerate(rep.steps, start=1):
        t = step.transform
        m = step.matrix
        out.write(f"step {k}: T({t.i},{t.j}; w={fmt(t.w)}) -> alphas "
                  f"{[fmt(v) for v in m.alphas]} thetas {[fmt(v) for v in m.thetas]}  "
                  f"in {chain.target_set}_{n}: {step.member}\n")
    if not rep.steps:
        out.write("no transforms: no conclusion\n")
        return EXIT_OPEN
    out.write(f"same structure: {rep.same_structure}\n")
    if not rep.all_members:
        out.write(f"membership fails at step {rep.failed_step}: conclusion withheld\n")
        return EXIT_OPEN
    kind = SystemKind.SERIES if chain.target_set == "S" else SystemKind.PARALLEL
    rel = Relation.SECOND if kind is SystemKind.SERIES else Relation.FIRST
    out.write(f"conclusion: {describe(rel, 'st', kind, n).split(' ', 1)[1].strip('()')}  "
              "(X = start, X* = final product)\n")
    grid = _grid_from_args(args, DEFAULT_GRID)
    A = ComponentSet.from_matrix(chain.start, chain.phi)
    B = ComponentSet.from_matrix(rep.final, chain.phi)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    v = compare_st(A, B, kind, grid, tol)
    out.write(f"grid check (phi={fmt(chain.phi)}): {v.relation.value}, "
              f"max_violation {fmt(v.max_violation)}\n")
    return EXIT_OK


def cmd_eval(args, out):
    p = EG2Params(args.theta, args.phi, args.alpha)
    out.write("x,cdf,survival,pdf,hazard,reversed_hazard\n")
    for x in args.x:
        vals = []
        for fn in (cdf, survival, pdf, hazard, reversed_hazard):
            try:
                vals.append(fmt(fn(p, x)))
            except OverflowError:
                vals.append("nan")
        out.write(",".join([fmt(x)] + vals) + "\n")
    return EXIT_OK


def build_parser():
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-min", type=float)
    grid.add_argument("--grid-max", type=float)
    grid.add_argument("--grid-points", type=int)
    grid.add_argument("--spacing", choices=("linear", "log"))
    grid.add_argument("--tol", type=float)
    grid.add_argument("--csv", metavar="PATH", help="write the grid table as CSV")

    parser = argparse.ArgumentParser(prog="eg2order", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[grid], help="compare two systems from a scenario file")
    p.add_argument("scenario")
    p.add_argument("--dump-normalized", action="store_true",
                   help="print the normalized scenario and exit")
    p.add_argument("--record", metavar="PATH", help="write a JSON run record")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("crossings", parents=[grid], help="locate survival-function crossings")
    p.add_argument("scenario")
    p.add_argument("--dump-normalized", action="store_true")
    p.set_defaults(func=cmd_crossings)

    p = sub.add_parser("reproduce", parents=[grid], help="re-run a worked example")
    p.add_argument("example", choices=("3.3", "3.4", "3.11"))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("chain", parents=[grid], help="verify a T-transform chain file")
    p.add_argument("chain")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("eval", help="distribution values at single points")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("x", type=float, nargs="+")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (ScenarioError, DomainError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
