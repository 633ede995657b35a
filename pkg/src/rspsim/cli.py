"""Command-line front end: ``rspsim {run,sweep,resources,compress}``.

Exit codes: 0 success, 2 argument error, 3 domain error.  Output is built
in full before anything is written, so a failing command never leaves
partial CSV rows behind.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from .errors import DomainError
from .protocols import PROTOCOLS, run_monte_carlo, run_protocol
from .qcore import TargetQubit
from .regionsched import QUARTER_PI, check_q, schedule_value
from .resources import (
    SWEEP_KINDS, appendixA_depth, appendixB_depth, greedy_compress, improved1_depth, sweep_curve,
)

EXIT_DOMAIN = 3


def _f6(x) -> str:
    return "" if x is None else f"{x:.6f}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_depth(args, protocol: str) -> int | None:
    """Turn --depth / --m / --f-min into an integer schedule depth."""
    if args.depth is not None:
        return args.depth
    if args.m is not None:
        return math.ceil(appendixA_depth(args.q, args.m))
    if args.f_min is not None:
        if protocol == "improved1":
            return math.ceil(improved1_depth(args.q, args.f_min))
        if protocol == "appendixB":
            return math.ceil(appendixB_depth(args.q, args.f_min))
    return None


def _validate(parser, args):
    protocol = args.protocol
    if protocol == "ghz":
        return
    if args.q is None:
        parser.error(f"--q is required for protocol {protocol}")
    given = [x for x in (args.depth, args.m, args.f_min) if x is not None]
    if len(given) != 1:
        parser.error("give exactly one of --depth, --m, --f-min")
    if args.f_min is not None and protocol not in ("improved1", "appendixB"):
        parser.error("--f-min only sets the depth of improved1 or appendixB")
    if protocol == "improved2" and args.P is None:
        parser.error("protocol improved2 needs --P")


def _angles(args):
    theta, phi = args.theta, args.phi
    if args.degrees:
        theta, phi = math.radians(theta), math.radians(phi)
    return theta, phi


def _plan(args, depth):
    return greedy_compress(args.q, depth, args.P) if args.protocol == "improved2" else None


def cmd_run(parser, args) -> str:
    _validate(parser, args)
    if args.mode == "montecarlo" and (args.trials is None or args.seed is None):
        parser.error("montecarlo mode needs --trials and --seed")
    theta, phi = _angles(args)
    target = TargetQubit(theta, phi)
    depth = _resolve_depth(args, args.protocol)
    plan = _plan(args, depth)
    if args.mode == "montecarlo":
        mc = run_monte_carlo(args.protocol, target, trials=args.trials, seed=args.seed,
                             q=args.q, depth=depth, plan=plan)
        rows = [[lab, c, _f6(p), n, _f6(n / mc.trials)]
                for lab, c, p, n in zip(mc.labels, mc.cbits, mc.exact_probabilities, mc.counts)]
        header = ["label", "cbits", "exact_probability", "count", "frequency"]
        if args.format == "csv":
            return _csv(header, rows)
        lines = [f"protocol: {args.protocol} (montecarlo, trials={mc.trials}, seed={mc.seed})"]
        lines.append("  ".join(f"{h:>17}" for h in header))
        lines += ["  ".join(f"{str(v):>17}" for v in r) for r in rows]
        lines.append(f"mean_fidelity: {_f6(mc.mean_fidelity)}")
        lines.append(f"max_sigma_deviation: {mc.max_sigma_deviation():.3f}")
        return "\n".join(lines) + "\n"

    out = run_protocol(args.protocol, target, q=args.q, depth=depth, plan=plan)
    rep = out.report
    header = ["label", "bits", "cbits", "probability", "fidelity", "convention", "success"]
    rows = [[b.label, "".join(map(str, b.bits)), b.cbits, _f6(b.probability), _f6(b.fidelity),
             rep.convention if b.fidelity is not None else "", int(b.success)]
            for b in rep.branches]
    if args.format == "csv":
        return _csv(header, rows)
    lines = [f"protocol: {rep.protocol}", f"theta: {theta:.6f}  phi: {phi:.6f}"]
    lines.append("  ".join(f"{h:>12}" for h in header))
    lines += ["  ".join(f"{str(v):>12}" for v in r) for r in rows]
    lines.append(f"simulated_fidelity: {_f6(rep.simulated_fidelity)} ({rep.convention})")
    if rep.analytic_fidelity is not None:
        lines.append(f"analytic_fidelity: {_f6(rep.analytic_fidelity)}")
        lines.append(f"abs_diff: {abs(rep.simulated_fidelity - rep.analytic_fidelity):.3e}")
    if rep.chi is not None:
        lines.append(f"chi: {_f6(rep.chi)}")
    if out.success_probability is not None:
        lines.append(f"success_probability: {_f6(out.success_probability)}")
        lines.append(f"analytic_success_probability: {_f6(out.analytic_success_probability)}")
    return "\n".join(lines) + "\n"


def _sweep_thetas(protocol: str, q: float | None, depth: int | None, grid: int) -> np.ndarray:
    if protocol == "ghz":
        return np.linspace(0, math.pi / 2, grid)
    gap = schedule_value(q, depth)
    if protocol in ("improved1", "appendixB"):
        return np.linspace(QUARTER_PI - gap, QUARTER_PI + gap, grid)
    k_lo = (grid + 1) // 2
    lo = np.linspace(0, QUARTER_PI - gap, k_lo)
    hi = np.linspace(math.pi / 2, QUARTER_PI + gap, grid - k_lo)[::-1]
    return np.concatenate([lo, hi])


def _sweep_point(protocol, target, q, depth, plan):
    out = run_protocol(protocol, target, q=q, depth=depth, plan=plan)
    rep = out.report
    if protocol == "appendixB":
        return out.analytic_success_probability, out.success_probability
    if protocol == "improved2":
        return out.analytic_success_probability * rep.analytic_fidelity, out.details["success_fidelity"]
    return rep.analytic_fidelity, rep.simulated_fidelity


def cmd_sweep(parser, args) -> str:
    _validate(parser, args)
    if args.grid < 2:
        parser.error("--grid must be >= 2")
    depth = _resolve_depth(args, args.protocol)
    plan = _plan(args, depth)
    phi = math.radians(args.phi) if args.degrees else args.phi
    rows = []
    for theta in _sweep_thetas(args.protocol, args.q, depth, args.grid):
        a, s = _sweep_point(args.protocol, TargetQubit(float(theta), phi), args.q, depth, plan)
        rows.append([_f6(theta), _f6(a), _f6(s), f"{abs(a - s):.3e}"])
    return _csv(["theta", "analytic_F", "simulated_F", "abs_diff"], rows)


def cmd_resources(parser, args) -> str:
    if args.kind == "appendixA":
        if args.m is None or args.f_min is not None:
            parser.error("appendixA takes --m (and not --f-min)")
    elif args.f_min is None or args.m is not None:
        parser.error(f"{args.kind} takes --f-min (and not --m)")
    if args.q is not None:
        qs, q_range = args.q, None
    elif args.q_min is not None and args.q_max is not None:
        qs, q_range = None, (args.q_min, args.q_max)
    else:
        parser.error("give --q values or both --q-min and --q-max")
    table = sweep_curve(args.kind, qs, q_range=q_range, samples=args.samples, m=args.m, f_min=args.f_min)
    fmt = (lambda x: f"{x:.2f}") if args.table else _f6
    if args.kind == "appendixA":
        return _csv(["q", "N"], [[_f6(q), fmt(n)] for q, n in table])
    return _csv(["q", "N", "N_plus_1"], [[_f6(q), fmt(n), fmt(n + 1)] for q, n in table])


def cmd_compress(parser, args) -> str:
    if (args.N is None) == (args.m is None):
        parser.error("give exactly one of --N, --m")
    check_q(args.q)
    N = args.N if args.N is not None else math.ceil(appendixA_depth(args.q, args.m))
    plan = greedy_compress(args.q, N, args.P, strict=args.strict)
    lines = [f"M={plan.M}", "heads:"] + [str(h) for h in plan.heads]
    if plan.below_floor:
        lines.append("below_floor: " + " ".join(map(str, plan.below_floor)))
    lines.append("sections:")
    rows = []
    for sec in plan.sections:
        (l0, l1), (u0, u1) = plan.theta_intervals(sec)
        rows.append([sec.k, sec.head, sec.lowest, _f6(sec.B), _f6(l0), _f6(l1), _f6(u0), _f6(u1)])
    table = _csv(["k", "head", "lowest", "B", "theta_lower_lo", "theta_lower_hi",
                  "theta_upper_lo", "theta_upper_hi"], rows)
    return "\n".join(lines) + "\n" + table


def _add_depth_flags(p):
    p.add_argument("--q", type=float, help="minimum fidelity of the explicit scheme, in (1/2, 1)")
    p.add_argument("--depth", type=int, help="schedule depth N")
    p.add_argument("--m", type=int, help="accuracy exponent; depth = ceil(N(q, m))")
    p.add_argument("--f-min", dest="f_min", type=float, help="target central fidelity (improved1/appendixB)")
    p.add_argument("--P", type=float, help="POVM success probability (improved2)")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--degrees", action="store_true", help="read angles in degrees")
    p.add_argument("--output", help="write to this path instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rspsim", description="Remote state preparation simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one protocol on one target")
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--theta", type=float, required=True)
    _add_depth_flags(p)
    p.add_argument("--mode", choices=("exact", "montecarlo"), default="exact")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="analytic vs simulated fidelity over a theta grid")
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--grid", type=int, default=200)
    _add_depth_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("resources", help="depth N against q for the closed-form resource formulas")
    p.add_argument("--kind", choices=SWEEP_KINDS, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--f-min", dest="f_min", type=float)
    p.add_argument("--q", type=float, nargs="+")
    p.add_argument("--q-min", type=float)
    p.add_argument("--q-max", type=float)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--table", action="store_true", help="2-decimal table-reproduction mode")
    p.add_argument("--output")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("compress", help="greedy channel compression plan")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--P", type=float, required=True)
    p.add_argument("--strict", action="store_true", help="reject heads with P < 1/(B^2+1)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_compress)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(parser, args)
    except DomainError as exc:
        print(f"rspsim: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, getattr(args, "output", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
