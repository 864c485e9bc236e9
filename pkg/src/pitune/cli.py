"""Command-line entry point.

Exit status: 0 on success, 2 for invalid input or usage, 3 for numerical
failures and unwritable outputs.  ``PI_TUNE_THREADS`` caps the worker threads
used for grid scans (0 picks the CPU count).
"""

import argparse
import sys

import numpy as np

from . import charts, nodelay, published, rules, stability
from .errors import NumericalError, PiTuneError
from .model import Gains, PlantModel, denormalize
from .optimizer import find_optimum
from .oracle import OracleConfig, simulate_loop, simulate_loop_batch
from .steps import evaluate, sample, solve_steps

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

ORACLE_TOL = 1e-6


def _tp_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty tp list")
    return vals


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _kv(pairs):
    return "".join(f"{k}={charts.fmt(v) if not isinstance(v, str) else v}\n" for k, v in pairs)


def cmd_tune(args):
    plant = PlantModel(args.K, args.Tp, args.L)
    if plant.delay_L == 0:
        b = nodelay.nodelay_optimum()
        ix = nodelay.nodelay_indexes(b)
        _emit(_kv([("regime", "no-delay"), ("h", b.h), ("ti", b.ti), ("Kp", b.h / plant.gain_K),
                   ("Ti", b.ti * plant.time_constant_Tp), ("po_y", ix.po_y), ("po_v", ix.po_v),
                   ("ise", ix.ise)]), args.out)
        return EXIT_OK
    tp = plant.tp
    if args.rule == "proposed":
        res = find_optimum(tp)
        g, extra = res.gains, [("active_curve", res.active_curve.value)]
    else:
        rg = rules.apply_rule(args.rule, tp)
        g = Gains(rg.h, rg.hi)
        extra = [("extrapolated", "yes" if rg.extrapolated else "no")]
    pi = denormalize(g, plant)
    ix = evaluate(tp, g)
    _emit(_kv([("rule", args.rule), ("tp", tp), ("h", g.h), ("hi", g.hi), ("Kp", pi.kp),
               ("Ti", pi.ti), ("Ti_over_L", g.h / g.hi), *extra,
               ("po_y", ix.po_y), ("po_v", ix.po_v), ("ise", ix.ise)]), args.out)
    return EXIT_OK


def cmd_simulate(args):
    g = Gains(args.h, args.hi)
    if args.oracle:
        resp = simulate_loop(args.tp, g, OracleConfig(), args.setpoint_weight)
    else:
        resp = sample(solve_steps(args.tp, g, setpoint_weight=args.setpoint_weight))
    lines = ["t,y,v\n"]
    lines += [f"{t:.2f},{y:.6f},{v:.6f}\n" for t, y, v in zip(resp.t_grid, resp.y, resp.v)]
    _emit("".join(lines), args.out)
    return EXIT_OK


def cmd_chart(args):
    if args.no_delay:
        bundle = charts.nodelay_chart(args.points)
    else:
        bundle = charts.delay_chart(args.tp, args.points)
    for path in charts.emit_chart(bundle, args.format, args.out):
        print(path)
    return EXIT_OK


def cmd_compare(args):
    rows = charts.comparison_rows(args.tp, include_optimum=not args.no_optimum)
    _emit(charts.comparison_csv(rows), args.out)
    return EXIT_OK


def cmd_fit_table(args):
    fits = rules.printed_fits() if args.printed else None
    _emit(charts.fit_table_csv(rules.fit_table(args.tp, fits)), args.out)
    return EXIT_OK


def cmd_stability(args):
    h_u, z_a = stability.ultimate_gain(args.tp)
    z_u, k_u = stability.ultimate_point(args.tp)
    x, y = stability.borderline_curve(args.tp, args.points)
    head = (f"# h_u={charts.fmt(h_u)}\n# z_a={charts.fmt(z_a)}\n"
            f"# K_uK={charts.fmt(k_u)}\n# z_u={charts.fmt(z_u)}\n")
    _emit(head + charts.polyline_csv(x, y), args.out)
    return EXIT_OK


def cmd_oracle_check(args):
    """Largest steps-versus-oracle gap over the tabulated rule gains."""
    lines = ["tp,max_abs_dev\n"]
    worst = 0.0
    for tp in args.tp:
        gs = [rules.rule_or_none(r, tp) for r in rules.RuleId]
        gs = [g for g in gs if g is not None]
        hs = np.array([g.h for g in gs])
        his = np.array([g.hi for g in gs])
        _, y_o, _ = simulate_loop_batch(tp, hs, his, OracleConfig(step=args.step))
        dev = max(
            float(np.max(np.abs(sample(solve_steps(tp, Gains(g.h, g.hi))).y - y_o[:, k])))
            for k, g in enumerate(gs)
        )
        worst = max(worst, dev)
        lines.append(f"{charts.fmt(tp)},{dev:.3e}\n")
    _emit("".join(lines), args.out)
    if worst >= ORACLE_TOL:
        print(f"deviation {worst:.3e} exceeds {ORACLE_TOL:g}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pitune", description="PI tuning for first-order time-delay processes")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tune", help="gains for a physical plant")
    t.add_argument("--K", type=float, required=True, help="plant gain")
    t.add_argument("--Tp", type=float, required=True, help="plant time constant")
    t.add_argument("--L", type=float, required=True, help="dead time (0 for the delay-free optimum)")
    t.add_argument("--rule", default="proposed", choices=["proposed", "zn_time", "zn_freq", "za_iste", "proposed_fit"])
    t.add_argument("--out")
    t.set_defaults(func=cmd_tune)

    s = sub.add_parser("simulate", help="closed-loop response on the 701-point grid")
    s.add_argument("--tp", type=float, required=True)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--hi", type=float, required=True)
    s.add_argument("--setpoint-weight", type=float, default=0.0)
    s.add_argument("--oracle", action="store_true", help="use the RK4 reference integrator")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("chart", help="tuning-chart curves as CSV or JSON files")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--tp", type=float)
    g.add_argument("--no-delay", action="store_true")
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--points", type=int, default=charts.CURVE_POINTS)
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(func=cmd_chart)

    m = sub.add_parser("compare", help="rule gains and indexes side by side")
    m.add_argument("--tp", type=_tp_list, default=list(published.TP_ROWS))
    m.add_argument("--no-optimum", action="store_true", help="skip the constrained optimum column")
    m.add_argument("--out")
    m.set_defaults(func=cmd_compare)

    f = sub.add_parser("fit-table", help="gains and indexes from the quadratic fits")
    f.add_argument("--tp", type=_tp_list, default=list(published.TP_ROWS))
    f.add_argument("--printed", action="store_true", help="use the rounded printed coefficients, not a refit")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit_table)

    b = sub.add_parser("stability", help="ultimate gain and stability borderline")
    b.add_argument("--tp", type=float, required=True)
    b.add_argument("--points", type=int, default=charts.CURVE_POINTS)
    b.add_argument("--out")
    b.set_defaults(func=cmd_stability)

    o = sub.add_parser("oracle-check", help="compare the exact solver with the RK4 reference")
    o.add_argument("--tp", type=_tp_list, default=list(published.TP_ROWS))
    o.add_argument("--step", type=float, default=1e-4)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (NumericalError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PiTuneError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
