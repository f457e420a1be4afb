"""Command line entry point: ``kaclab theorem|smallball|roots|region|gram|eval``.

Exit codes: 0 success, 1 usage error, 2 a built-in check failed.
"""

import argparse
import logging
import sys

import numpy as np

from . import lab
from .coefficients import CoefficientLaw, sample_coefficients
from .errors import KaclabError
from .evaluator import layer_table
from .region import build_region_spec, dump_csv, render_svg
from .roots import find_roots

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _str_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _law(text):
    try:
        return CoefficientLaw.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p, n_list=False):
    p.add_argument("--law", type=_law, default=CoefficientLaw.rademacher(),
                   help="coefficient law token, e.g. rademacher, pareto:p=0.9,scale=1")
    if n_list:
        p.add_argument("--n", type=_int_list, default=[128, 256, 512], help="comma separated n values")
    else:
        p.add_argument("--n", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory (KACLAB_OUT overrides)")


def _region_args(p):
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--regime", choices=["half", "third"], default="half")


def build_parser():
    parser = _Parser(prog="kaclab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("theorem", help="event counts for the zero-free region")
    _common(p, n_list=True)
    _region_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--roots", action="store_true", help="also count roots inside the region")

    p = sub.add_parser("smallball", help="Monte Carlo small-ball table")
    _common(p, n_list=True)
    p.add_argument("--k", type=_str_list, default=["1"], help="k rules: integers, n/4, random, maxgcd")
    p.add_argument("--t", type=_str_list, default=["0.5", "1", "2", "sqrt(n)/8"])
    p.add_argument("--trials", type=int, default=10**4)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--C1", type=float, default=None)
    p.add_argument("--C2", type=float, default=None)

    p = sub.add_parser("roots", help="roots of sampled polynomials as CSV")
    _common(p)
    _region_args(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("region", help="region grid")
    rsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    d = rsub.add_parser("dump", help="grid centers as CSV plus an SVG picture")
    d.add_argument("--n", type=int, default=10)
    _region_args(d)
    d.set_defaults(beta=0.0)
    d.add_argument("--out", default=None)

    p = sub.add_parser("gram", help="Gram-matrix identities")
    gsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    g = gsub.add_parser("verify", help="pass/fail table for det(V_k V_k^T)")
    g.add_argument("--n", type=_int_list, default=[8, 12, 64, 257, 1024])

    p = sub.add_parser("eval", help="per-layer min/max of |G_n| over the region")
    _common(p)
    _region_args(p)
    p.add_argument("--trial", type=int, default=0)
    return parser


def _emit(text, out, name):
    out = lab.resolve_out(out)
    if out is None:
        sys.stdout.write(text)
    else:
        lab.ensure_writable(out)
        (out / name).write_text(text)


def cmd_theorem(args):
    cfg = lab.ExperimentConfig(law=args.law.token, n_list=args.n, p=args.p, beta=args.beta,
                               regime=args.regime, trials=args.trials, master_seed=args.seed,
                               workers=args.workers, out=args.out, roots=args.roots)
    report = lab.run_theorem_experiment(cfg)
    if lab.resolve_out(args.out) is None:
        sys.stdout.write(report.to_csv())
    ok = all(r.count_joint_event <= r.count_min_event <= r.trials for r in report.rows)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_smallball(args):
    consts = None
    if args.C1 is not None and args.C2 is not None:
        consts = lab.Constants(args.C1, args.C2)
    rows = lab.run_smallball_sweep(args.law, args.n, args.k, args.t, args.trials, args.seed,
                                   args.workers, consts, out=args.out)
    if lab.resolve_out(args.out) is None:
        sys.stdout.write(lab.csv_text(lab.SMALLBALL_COLUMNS, rows))
    return EXIT_OK


def cmd_roots(args):
    if lab.resolve_out(args.out) is not None:
        lab.run_root_atlas(args.law, args.n, args.trials, args.seed, args.workers, args.out,
                           args.p, args.beta, args.regime)
        return EXIT_OK
    rows = []
    for t in range(args.trials):
        rs = find_roots(sample_coefficients(args.law, args.n, args.seed, t))
        for z, r in zip(rs.roots, rs.residuals):
            rows.append([t, z.real, z.imag, abs(z), np.angle(z), r])
    sys.stdout.write(lab.csv_text(lab.ROOT_COLUMNS, rows))
    return EXIT_OK


def cmd_region(args):
    spec = build_region_spec(args.n, args.p, args.beta, args.regime)
    out = lab.resolve_out(args.out)
    if out is None:
        dump_csv(spec, sys.stdout)
        return EXIT_OK
    lab.ensure_writable(out)
    with open(out / "region.csv", "w") as fh:
        dump_csv(spec, fh)
    (out / "region.svg").write_text(render_svg(spec))
    return EXIT_OK


def cmd_gram(args):
    from .gram import verify_table

    rows = verify_table(args.n)
    failed = [r for r in rows if not r[-1]]
    print(f"{'check':<10}{'n':>6}{'k':>6}{'value':>24}{'expected':>24}  status")
    for name, n, k, value, expected, ok in rows:
        if not ok or k <= 2 or 2 * k == n:
            print(f"{name:<10}{n:>6}{k:>6}{value:>24.17g}{expected:>24.17g}  {'pass' if ok else 'FAIL'}")
    print(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_eval(args):
    spec = build_region_spec(args.n, args.p, args.beta, args.regime)
    s = sample_coefficients(args.law, args.n, args.seed, args.trial)
    rows = layer_table(s, spec)
    _emit(lab.csv_text(["l", "phi", "min_modulus", "argmin_k", "max_modulus"], rows), args.out, "eval.csv")
    return EXIT_OK


COMMANDS = {"theorem": cmd_theorem, "smallball": cmd_smallball, "roots": cmd_roots,
            "region": cmd_region, "gram": cmd_gram, "eval": cmd_eval}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (KaclabError, ValueError) as exc:
        print(f"kaclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
