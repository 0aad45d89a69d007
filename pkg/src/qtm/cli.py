"""Command-line interface: ``qtm point | sweep | verify | plot``.

Exit codes: 0 success, 1 runtime or numerical failure, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analytic_global as ag
from . import analytic_local as al
from .errors import QTMError, SchemaError
from .model import ModelParams
from .sweep import SweepSpec, write_sweep
from .verify import DEFAULT_TOLERANCE, run_verification

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _safe(fn):
    try:
        return fn()
    except QTMError as exc:
        return {"error": str(exc)}


def point_report(params: ModelParams) -> dict:
    """Closed-form and numeric observables at one parameter point."""
    from .numerics import transport_report

    local = {
        "current_single": _safe(lambda: al.current_single(params)),
        "current_two": _safe(lambda: al.current_two(params)),
        "alpha": _safe(lambda: al.scaling_alpha(params)),
        "contrast": _safe(lambda: al.contrast(params, "two").contrast),
    }
    out = {"params": params.to_dict(), "local": local}
    if params.eps_sub == -1:
        rep = _safe(lambda: transport_report(params).to_dict())
        out["numeric"] = rep
    if params.bosonic_qubits and params.g < params.omega:
        glob = {"current": _safe(lambda: ag.current_global(params))}
        if params.t_left != params.t_right:
            glob["contrast"] = _safe(lambda: ag.contrast_global(params) if params.t_right == 0
                                     else ag.contrast_global_swap(params))
        out["global"] = glob
    return out


def cmd_point(args) -> int:
    params = ModelParams.from_json(_read(args.params))
    print(json.dumps(point_report(params), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec.from_json(_read(args.spec))
    write_sweep(spec, args.output, jobs=args.jobs)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cases < 1:
        raise SchemaError("--cases must be at least 1")
    tol = DEFAULT_TOLERANCE if args.tolerance is None else args.tolerance
    report = run_verification(args.seed, args.cases, tol, chain=not args.no_chain)
    print(report.table())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK if report.all_passed else EXIT_RUNTIME


def cmd_plot(args) -> int:
    from .svg import render_svg

    svg = render_svg(_read(args.csv))
    with open(args.output, "w", newline="") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for sweeps (default: logical cores)")
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                        help="relative tolerance for verify (default 1e-7)")

    parser = argparse.ArgumentParser(prog="qtm", parents=[common],
                                     description="Heat transport through coupled quantum subsystems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", parents=[common], help="full report at one parameter point")
    p.add_argument("params", help="parameter JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_point)

    s = sub.add_parser("sweep", parents=[common], help="one-axis sweep written as CSV")
    s.add_argument("spec", help="sweep spec JSON file")
    s.add_argument("-o", "--output", required=True, help="output CSV path")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", parents=[common], help="closed forms against the Lindblad solver")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--cases", type=int, default=50)
    v.add_argument("--json", help="also write the report as JSON to this path")
    v.add_argument("--no-chain", action="store_true", help="skip the chain-length block")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", parents=[common], help="SVG line plot of a sweep CSV")
    pl.add_argument("csv")
    pl.add_argument("-o", "--output", required=True)
    pl.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    args.jobs = getattr(args, "jobs", None) or os.cpu_count() or 1
    args.tolerance = getattr(args, "tolerance", None)
    try:
        return args.func(args)
    except (SchemaError, OSError) as exc:
        print(f"qtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QTMError as exc:
        print(f"qtm: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
