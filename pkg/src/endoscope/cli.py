"""Command-line driver: ``endoscope {verify-fl,sweep-fl,orders,growth}``.

Exit status is 0 when every record passes, 1 when a check fails and 2 on a
configuration or engine error (a JSON failure record is printed on stdout).
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .errors import ConfigParseError, EndoscopeError, GridExceeded
from .growth import (
    exponent_report,
    gl_order,
    gl_order_bruteforce,
    ideal_spec_parse,
    u_order,
    u_order_bruteforce,
)
from .orbital import DEFAULT_GRID, E3, EXEL, StableClassParams, grid_points, verify_transfer

FL_COLUMNS = ["case", "q", "A", "B", "C", "r", "delta_num", "delta_den", "kappa_closed",
              "kappa_oracle", "stable_closed", "stable_oracle", "pass"]


def rat(x):
    if x is None:
        return ""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _int_list(s):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def fl_record(rep):
    P = rep.params
    return {
        "case": P.case, "q": P.q, "A": P.A, "B": P.B, "C": P.C if P.case == E3 else "", "r": P.r,
        "delta_num": rep.delta.numerator, "delta_den": rep.delta.denominator,
        "kappa_closed": rat(rep.kappa_closed), "kappa_oracle": rat(rep.kappa_oracle),
        "stable_closed": rat(rep.stable_closed), "stable_oracle": rat(rep.stable_oracle),
        "pass": "true" if rep.passed else "false",
    }


def fl_detail(rep):
    rec = fl_record(rep)
    rec["mode"] = rep.mode
    if rep.per_class_G is not None:
        rec["per_class_G"] = [{"pattern": list(p), "kappa": k, "count": c} for p, k, c in rep.per_class_G]
        rec["per_class_H"] = [{"pattern": list(p), "count": c} for p, _, c in rep.per_class_H]
    return rec


def emit(records, columns, fmt, out, detail=None):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(records)
        out.write(buf.getvalue())
    elif fmt == "json":
        out.write(json.dumps(detail if detail is not None else records, indent=2, sort_keys=True) + "\n")
    else:
        widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in records)) for c in columns}
        out.write("  ".join(c.ljust(widths[c]) for c in columns).rstrip() + "\n")
        for r in records:
            out.write("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns).rstrip() + "\n")


# -- subcommands -----------------------------------------------------------------

def cmd_verify_fl(args, out):
    P = StableClassParams(args.case, args.q, args.A, args.B, args.C, args.r)
    rep = verify_transfer(P, args.mode, M=args.box, check_box=not args.no_box_check)
    emit([fl_record(rep)], FL_COLUMNS, args.format, out, detail=[fl_detail(rep)])
    return rep.passed


def cmd_sweep_fl(args, out):
    limit = DEFAULT_GRID
    if not args.force and (max(args.q) > max(limit["q"]) or max(args.r) > max(limit["r"])
                           or args.max > limit["max_abc"]):
        raise GridExceeded(
            f"grid q={args.q}, r={args.r}, max={args.max} is outside the default budget "
            f"(q in {list(limit['q'])}, r in {list(limit['r'])}, max {limit['max_abc']}); pass --force"
        )
    cases = [E3, EXEL] if args.case == "all" else [args.case.upper()]
    reps = []
    for case in cases:
        points, _ = grid_points(case, tuple(args.q), tuple(args.r), args.max)
        reps += [verify_transfer(P, args.mode, check_box=not args.no_box_check) for P in points]
    reps.sort(key=lambda rep: rep.params.key())
    emit([fl_record(r) for r in reps], FL_COLUMNS, args.format, out, detail=[fl_detail(r) for r in reps])
    return all(r.passed for r in reps)


def cmd_orders(args, out):
    rows = []
    for n in args.n:
        for q in args.q:
            for group, closed, brute in (("U", u_order, u_order_bruteforce), ("GL", gl_order, gl_order_bruteforce)):
                rec = {"group": f"{group}{n}", "q": q, "order": closed(n, q), "bruteforce": "", "pass": "true"}
                if args.check_bruteforce:
                    b = brute(n, q)
                    rec["bruteforce"] = b
                    rec["pass"] = "true" if b == rec["order"] else "false"
                rows.append(rec)
    emit(rows, ["group", "q", "order", "bruteforce", "pass"], args.format, out)
    return all(r["pass"] == "true" for r in rows)


def cmd_growth(args, out):
    ideals = [ideal_spec_parse(s) for s in args.ideal]
    if args.inert_sweep:
        if len(args.inert_sweep) != 2:
            raise ConfigParseError("--inert-sweep takes Q,KMAX")
        q, kmax = args.inert_sweep
        ideals += [ideal_spec_parse(f"{q},inert,{k}") for k in range(1, kmax + 1)]
    if not ideals:
        raise ConfigParseError("give at least one --ideal or --inert-sweep")
    table = exponent_report(ideals)
    rows = [
        {
            "ideal": r.ideal.spec(), "N": r.N_ideal, "V": rat(r.V), "char_count": r.char_count,
            "beta_upper": rat(r.beta_upper), "beta_lower": rat(r.beta_lower),
            "exponent_upper": f"{r.exponent_upper:.6f}", "V_over_N8": rat(r.V_over_N8),
            "lower_over_upper": rat(r.lower_over_upper),
        }
        for r in table.rows
    ]
    cols = ["ideal", "N", "V", "char_count", "beta_upper", "beta_lower", "exponent_upper",
            "V_over_N8", "lower_over_upper"]
    detail = {"rows": rows, "decreasing": table.decreasing, "gap_to_3_8": f"{table.final_gap:.6f}"}
    emit(rows, cols, args.format, out, detail=detail)
    return True


def build_parser():
    ap = argparse.ArgumentParser(prog="endoscope", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["human", "json", "csv"], default="human")

    v = sub.add_parser("verify-fl", help="check the level-r transfer identity at one point")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--case", type=str.upper, choices=[E3, EXEL], required=True)
    v.add_argument("--A", type=int, required=True)
    v.add_argument("--B", type=int, required=True)
    v.add_argument("--C", type=int, default=0)
    v.add_argument("--r", type=int, default=0)
    v.add_argument("--mode", choices=["closed", "oracle"], default="closed")
    v.add_argument("--box", type=int, default=None, help="box radius M (default from the parameters)")
    v.add_argument("--no-box-check", action="store_true", help="skip the M+1 stabilization rerun")
    fmt(v)
    v.set_defaults(func=cmd_verify_fl)

    s = sub.add_parser("sweep-fl", help="verify a whole parameter grid")
    s.add_argument("--q", type=_int_list, default=list(DEFAULT_GRID["q"]))
    s.add_argument("--case", type=str.lower, choices=["e3", "exel", "all"], default="all")
    s.add_argument("--r", type=_int_list, default=list(DEFAULT_GRID["r"]))
    s.add_argument("--max", type=int, default=DEFAULT_GRID["max_abc"], help="largest A, B, C")
    s.add_argument("--mode", choices=["closed", "oracle"], default="closed")
    s.add_argument("--force", action="store_true", help="allow grids beyond the default budget")
    s.add_argument("--no-box-check", action="store_true")
    fmt(s)
    s.set_defaults(func=cmd_sweep_fl)

    o = sub.add_parser("orders", help="orders of GL_n and U_n over F_q")
    o.add_argument("--n", type=_int_list, default=[1, 2, 3])
    o.add_argument("--q", type=_int_list, default=[2, 3])
    o.add_argument("--check-bruteforce", action="store_true")
    fmt(o)
    o.set_defaults(func=cmd_orders)

    g = sub.add_parser("growth", help="V(n), character counts, beta bounds and the exponent")
    g.add_argument("--ideal", action="append", default=[], help="'Nv,type,k;...' (repeatable)")
    g.add_argument("--inert-sweep", type=_int_list, metavar="Q,KMAX", help="Nv=Q inert, k = 1..KMAX")
    fmt(g)
    g.set_defaults(func=cmd_growth)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        ok = args.func(args, out)
    except (EndoscopeError, ValueError) as exc:
        code = getattr(exc, "code", "CONFIG_PARSE")
        out.write(json.dumps({"status": "error", "code": code, "message": str(exc)}, sort_keys=True) + "\n")
        return 2
    return 0 if ok else 1


def main_entry():
    sys.exit(main())
