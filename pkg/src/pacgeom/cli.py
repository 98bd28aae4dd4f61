"""Command-line harness: run identity suites over zoo entries.

Exit codes: 0 when every non-skipped check passes, 1 on any failure,
2 on usage errors.  JSON goes to stdout; diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import zoo
from .errors import PacgeomError, UsageError
from .paracontact import validate_structure
from .suites import SUITES, CheckReport, emit_report, run_suite
from .transforms import d_homothetic, sigma_preset, gauge_transform
from . import ad


def build_parser():
    p = argparse.ArgumentParser(
        prog="pacgeom",
        description="Numerical verification suites for almost paracontact "
                    "metric structures.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an identity suite over one entry")
    v.add_argument("--manifold", required=True)
    v.add_argument("--suite", required=True,
                   help=f"one of {', '.join(SUITES + ('all',))}")
    v.add_argument("--points", type=int, default=64)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=None,
                   help="override the per-check tolerances")
    v.add_argument("--format", choices=("text", "json"), default="text")

    sub.add_parser("list", help="list zoo entry ids")

    d = sub.add_parser("describe", help="describe one zoo entry")
    d.add_argument("--manifold", required=True)

    t = sub.add_parser("transform",
                       help="apply a homothety or gauge and re-validate")
    t.add_argument("--manifold", required=True)
    group = t.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float, default=None)
    group.add_argument("--sigma", type=str, default=None)
    t.add_argument("--points", type=int, default=16)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--format", choices=("text", "json"), default="json")
    return p


def cmd_verify(args) -> int:
    reports = run_suite(args.manifold, args.suite, points=args.points,
                        seed=args.seed, tol=args.tol)
    sys.stdout.buffer.write(emit_report(reports, args.format))
    sys.stdout.flush()
    return 0 if all(r.status != "fail" for r in reports) else 1


def cmd_list(_args) -> int:
    for entry_id in zoo.list_entries():
        print(entry_id)
    return 0


def cmd_describe(args) -> int:
    e = zoo.get_entry(args.manifold)
    man = e.manifold
    print(f"id:       {e.id}")
    print(f"backend:  {man.backend}")
    print(f"dim:      {man.dim} (n = {man.n})")
    if man.backend == "chart":
        print(f"box:      {man.chart_box}")
    expected = ", ".join(k for k, v in e.expected.items() if v) or "(none)"
    print(f"expected: {expected}")
    if e.twin:
        print(f"twin:     {e.twin}")
    print(f"notes:    {e.notes}")
    return 0


def cmd_transform(args) -> int:
    e = zoo.get_entry(args.manifold)
    s = e.structure
    rng = np.random.default_rng([args.seed, 1])
    pts = e.manifold.sample_points(args.points, rng, shrink=0.15)
    if args.alpha is not None:
        out = d_homothetic(s, args.alpha)
        label = f"homothety(alpha={args.alpha})"
    else:
        out = gauge_transform(s, sigma_preset(e.manifold, args.sigma))
        label = f"gauge(sigma={args.sigma})"
    rep = validate_structure(out, pts, raise_on_signature=False)
    reports = []
    for key in sorted(rep):
        resid = float(rep[key])
        tolerance = 1e-6
        reports.append(CheckReport(
            check_id=f"transform-{key}", paper_ref="l11/t12",
            manifold=f"{args.manifold}|{label}", max_abs_residual=resid,
            tolerance=tolerance, points=args.points, seed=args.seed,
            status="pass" if resid < tolerance else "fail"))
    fdeta = max(np.max(np.abs(ad.values(out.F.at(x))
                              - ad.values(out.d_eta.at(x)))) for x in pts)
    reports.append(CheckReport(
        check_id="transform-paracontact", paper_ref="l11/t12",
        manifold=f"{args.manifold}|{label}", max_abs_residual=float(fdeta),
        tolerance=1e-6, points=args.points, seed=args.seed,
        status="pass" if fdeta < 1e-6 else "fail"))
    sys.stdout.buffer.write(emit_report(reports, args.format))
    sys.stdout.flush()
    return 0 if all(r.status != "fail" for r in reports) else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "list":
            return cmd_list(args)
        if args.command == "describe":
            return cmd_describe(args)
        if args.command == "transform":
            return cmd_transform(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except PacgeomError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
