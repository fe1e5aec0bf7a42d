"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

from . import __version__
from . import analytic4 as a4
from .eigensolver import DEFAULT_SEED, METHODS, full_spectrum
from .exceptions import NumericalError
from .hamiltonian import CouplingParams
from .sweep import FORMATS, SweepConfig, find_threshold, run_sweep, write_csv, write_json
from .verification import verify

log = logging.getLogger("dimerchain")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, *, sweep=False):
    p.add_argument("--n", type=int, required=True, help="number of sites (even, >= 4)")
    p.add_argument("--j1", type=float, default=1.0, help="intra-dimer coupling (default 1)")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if sweep:
        p.add_argument("--format", choices=FORMATS, default="csv", dest="fmt")
        p.add_argument("--out", metavar="PATH", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dimerchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="sweep J2 at fixed J1 and write per-point concurrences")
    _common(p, sweep=True)
    p.add_argument("--j2-min", type=float, default=0.0)
    p.add_argument("--j2-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--ratio", action="store_true",
                   help="interpret --j2-min/--j2-max as J2/J1 ratios")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--strict", action="store_true",
                   help="exit with code 2 if any point is degenerate")

    p = sub.add_parser("threshold", help="bisect the zero of a signed concurrence")
    _common(p)
    p.add_argument("--which", choices=("c12", "c23"), required=True)
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"), required=True)

    p = sub.add_parser("verify", help="run the built-in verification bundle")
    p.add_argument("--n", type=int, nargs="+", default=[4, 6, 8], dest="n_list")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("spectrum", help="all 2^N eigenvalues by sector (N <= 12)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j1", type=float, default=1.0)
    p.add_argument("--j2", type=float, default=1.0)
    p.add_argument("--format", choices=FORMATS, default="csv", dest="fmt")
    p.add_argument("--out", metavar="PATH", default=None)
    return parser


@contextlib.contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cmd_sweep(args):
    config = SweepConfig(
        n=args.n, j1=args.j1, j2_min=args.j2_min, j2_max=args.j2_max, steps=args.steps,
        method=args.method, seed=args.seed, output_format=args.fmt, output_path=args.out,
        ratio=args.ratio, n_jobs=args.jobs,
    )
    result = run_sweep(config)
    with _open_out(config.output_path) as fh:
        (write_csv if config.output_format == "csv" else write_json)(result, fh)
    j2th_12, j2th_23 = result.thresholds
    print(f"argmax C_mean: {result.argmax_cmean}  j2th_12: {j2th_12}  j2th_23: {j2th_23}",
          file=sys.stderr)
    degenerate = [r.params.j2 for r in result.rows if r.degenerate]
    if degenerate:
        log.warning("degenerate ground state at j2 = %s", degenerate)
        if args.strict:
            return 2
    return 0


def _cmd_threshold(args):
    root = find_threshold(args.n, args.j1, args.which, args.bracket, args.method, args.seed)
    if root is None:
        print(f"no sign change of {args.which} in [{args.bracket[0]}, {args.bracket[1]}]")
        return 0
    print("%.17g" % root)
    return 0


def _cmd_verify(args):
    report = verify(args.n_list, seed=args.seed)
    print(report.format())
    return 0 if report.passed else 2


def _cmd_spectrum(args):
    params = CouplingParams(args.n, args.j1, args.j2)
    spec = full_spectrum(params)
    with _open_out(args.out) as fh:
        if args.fmt == "json":
            json.dump({"N": params.n, "J1": params.j1, "J2": params.j2,
                       "sectors": {str(r): [float(x) for x in v]
                                   for r, v in spec.sector_breakdown.items()}}, fh, indent=1)
            fh.write("\n")
        else:
            fh.write("r,eigenvalue\n")
            for r, values in spec.sector_breakdown.items():
                for x in values:
                    fh.write("%d,%.17g\n" % (r, x))
    if params.n == 4:
        dev = abs(spec.eigenvalues - a4.full_spectrum4(params.j1, params.j2).values()).max()
        print(f"max deviation from closed form: {dev:.3e}", file=sys.stderr)
    return 0


COMMANDS = {"sweep": _cmd_sweep, "threshold": _cmd_threshold, "verify": _cmd_verify,
            "spectrum": _cmd_spectrum}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dimerchain: error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"dimerchain: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"dimerchain: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
