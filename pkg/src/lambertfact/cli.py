"""Command-line interface: ``lambertfact <command> [options]``.

Exit codes: 0 success, 1 identity violation, 2 usage or configuration error.
"""

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial

import mpmath

from . import __version__
from .applications import ZETA_VARIANTS, exotic_reference, exotic_sum, omega_inner_sum, zeta_partial
from .arith import as_table, omega_distinct, persist_cache, resolve_function
from .derivatives import DerivParams, a_t, a_t_oracle
from .errors import IdentityViolation, LambertError
from .factorization import (
    c_matrix,
    conv_forward,
    conv_inverse,
    deriv_inverse_t1,
    deriv_matrix,
    hadamard_forward,
    hadamard_inverse,
    invert_lower_triangular,
    mixed_deriv_forward,
    mixed_deriv_inverse,
    mobius_matrix,
    partition_matrix,
    s_base,
    stilde,
    tdiv_matrix,
)
from .report import render
from .suites import SUITES, run_suite

log = logging.getLogger("lambertfact")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
LAMBDA_TOLERANCE = mpmath.mpf("1e-20")


class UsageError(Exception):
    pass


def _pmap(fn, items, jobs):
    """Map in a process pool; results come back in input order."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _write_table(args, header, rows, extra=None):
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        data = {"rows": [dict(zip(header, r)) for r in rows]}
        if extra:
            data.update(extra)
        text = json.dumps(data, indent=2) + "\n"
    _emit(args, text)


def _emit(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- matrix ------------------------------------------------------------------


def _build_matrix(args):
    N, kind, verify = args.N, args.kind, not args.no_verify
    f = resolve_function(args.f)
    g = resolve_function(args.g)
    builders = {
        "base": lambda: s_base(N),
        "tdiv": lambda: tdiv_matrix(N),
        "tdiv-inv": lambda: mobius_matrix(N),
        "partition": lambda: partition_matrix(N),
        "hadamard": lambda: hadamard_forward(f, N),
        "hadamard-inv": lambda: hadamard_inverse(f, N, verify),
        "stilde": lambda: stilde(g, N),
        "conv": lambda: conv_forward(g, N, verify=verify),
        "conv-inv": lambda: conv_inverse(g, N, verify),
        "deriv": lambda: deriv_matrix(args.t, N),
        "deriv-inv": lambda: (deriv_inverse_t1(N, verify) if args.t == 1
                              else invert_lower_triangular(deriv_matrix(args.t, N))),
        "mixed": lambda: mixed_deriv_forward(args.j, N),
        "mixed-inv": lambda: mixed_deriv_inverse(args.j, N, verify),
        "c": lambda: c_matrix(N),
    }
    return builders[kind]()


def cmd_matrix(args):
    M = _build_matrix(args)
    if args.format == "json":
        text = M.to_json(kind=args.kind, indent=None) + "\n"
    elif args.format == "csv":
        text = M.to_csv()
    else:
        text = M.to_pretty()
    _emit(args, text)
    log.info("matrix %s: dim=%d, max entry bits=%d", args.kind, M.dim, M.max_bits())
    return EXIT_OK


# -- verify ------------------------------------------------------------------


_ALL_PARTS = ("base", "hadamard", "convolution", "derivatives", "mixed", "mixed3",
              "lemmas", "reconstruct", "omega", "exotic", "zeta")


def _run_part(part, N, params):
    if part == "mixed3":
        return run_suite("mixed", N, **{**params, "j": 3})
    return run_suite(part, N, **params)


def cmd_verify(args):
    params = {"t": args.t, "j": args.j, "f": args.f, "g": args.g, "a": args.a, "form": args.form}
    if args.suite == "all":
        from .report import VerificationReport

        report = VerificationReport("all", {"N": args.N, "t": args.t})
        for part in _pmap(partial(_run_part, N=args.N, params=params), _ALL_PARTS, args.jobs):
            report.merge(part)
    else:
        report = run_suite(args.suite, args.N, **params)
    _emit(args, report.to_json(indent=2) + "\n")
    failure = report.first_failure()
    if failure is not None:
        print(f"identity violated: {failure.identity} at {failure.first_failure}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# -- zeta --------------------------------------------------------------------


def _parse_s(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return mpmath.mpf(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--s must be a number, got {text!r}") from exc


def cmd_zeta(args):
    s = _parse_s(args.s)
    if s <= 1:
        raise UsageError(f"zeta series diverge for s <= 1, got s={args.s}")
    with mpmath.workprec(args.precision):
        report = zeta_partial(args.variant, s, args.t, args.N, args.precision)
    _emit(args, report.to_csv() if args.format == "csv" else report.to_json(indent=2) + "\n")
    return EXIT_OK


# -- exotic / omega ----------------------------------------------------------


def _exotic_row(n, kind, s, t, precision):
    with mpmath.workprec(precision):
        value = exotic_sum(kind, n, s, t, precision)
        ref = exotic_reference(kind, n, s, t, precision)
        if isinstance(value, mpmath.mpf):
            dev = abs(value - ref)
            return n, value, ref, dev, bool(dev <= LAMBDA_TOLERANCE)
        return n, value, ref, Fraction(0) if value == ref else abs(value - ref), value == ref


def cmd_exotic(args):
    kind = args.kind.replace("-", "_")
    t = args.t if args.t is not None else (2 if kind == "jordan" else 1)
    rows = _pmap(partial(_exotic_row, kind=kind, s=args.s, t=t, precision=args.precision),
                 range(1, args.upto + 1), args.jobs)
    max_dev = max(r[3] for r in rows)
    _write_table(
        args, ["n", "value", "reference", "abs_deviation", "match"],
        [[n, render(v), render(ref), render(dev), str(ok).lower()] for n, v, ref, dev, ok in rows],
        extra={"kind": kind, "max_abs_deviation": render(max_dev),
               "all_match": all(r[4] for r in rows)},
    )
    print(f"max abs deviation: {render(max_dev)}", file=sys.stderr)
    return EXIT_OK if all(r[4] for r in rows) else EXIT_VIOLATION


def _omega_row(n):
    inner = omega_inner_sum(n)
    expected = omega_distinct(n)
    ok = inner > 0 and inner & (inner - 1) == 0 and inner.bit_length() - 1 == expected
    return n, inner, expected, ok


def cmd_omega(args):
    rows = _pmap(_omega_row, range(1, args.upto + 1), args.jobs)
    _write_table(
        args, ["n", "inner_sum", "omega", "match"],
        [[n, inner, om, str(ok).lower()] for n, inner, om, ok in rows],
        extra={"all_match": all(r[3] for r in rows)},
    )
    return EXIT_OK if all(r[3] for r in rows) else EXIT_VIOLATION


# -- derivative --------------------------------------------------------------


def cmd_derivative(args):
    params = DerivParams(args.t, args.N, as_table(resolve_function(args.a), args.N))
    oracle = a_t_oracle(params)
    rows = []
    for n in range(1, args.N + 1):
        value = a_t(params, n, args.form)
        rows.append([n, render(value), render(oracle[n]), str(value == oracle[n]).lower()])
    _write_table(args, ["n", "a_t", "oracle", "match"], rows,
                 extra={"t": args.t, "a": args.a, "form": args.form})
    return EXIT_OK if all(r[3] == "true" for r in rows) else EXIT_VIOLATION


# -- parser ------------------------------------------------------------------


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _precision(text):
    value = int(text)
    if value < 64:
        raise argparse.ArgumentTypeError(f"precision must be at least 64 bits, got {text}")
    return value


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--jobs", type=_positive, default=1,
                        help="worker processes (results are merged in input order)")
    shared.add_argument("--precision", type=_precision, default=128, help="bits for real arithmetic")
    shared.add_argument("--output", "-o", help="write to this file instead of stdout")
    shared.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lambertfact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", parents=[shared], help="print a factorization matrix")
    p.add_argument("--kind", required=True, choices=[
        "base", "tdiv", "tdiv-inv", "partition", "hadamard", "hadamard-inv", "stilde",
        "conv", "conv-inv", "deriv", "deriv-inv", "mixed", "mixed-inv", "c"])
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--t", type=_positive, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--f", default="id")
    p.add_argument("--g", default="phi")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    p.add_argument("--no-verify", action="store_true", help="skip checking inverses at build time")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", parents=[shared], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=list(SUITES))
    p.add_argument("--N", type=_positive, default=20)
    p.add_argument("--t", type=_positive, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--f", default="id")
    p.add_argument("--g", default="phi")
    p.add_argument("--a", default="id")
    p.add_argument("--form", choices=["printed", "stirling"], default="printed",
                   help="how A_t(n) is evaluated in the derivatives suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeta", parents=[shared], help="partial sums of a zeta series")
    p.add_argument("--variant", choices=list(ZETA_VARIANTS), default="sigma_st")
    p.add_argument("--s", required=True)
    p.add_argument("--t", type=_positive, default=1)
    p.add_argument("--N", type=_positive, default=50)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("exotic", parents=[shared], help="exotic sums against their classical values")
    p.add_argument("--kind", required=True,
                   choices=["totient", "jordan", "power-s", "power_s", "von-mangoldt", "von_mangoldt"])
    p.add_argument("--upto", type=_positive, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", type=_positive)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_exotic)

    p = sub.add_parser("omega", parents=[shared], help="2^omega(n) from the C matrix")
    p.add_argument("--upto", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("derivative", parents=[shared], help="A_t(n) against direct differentiation")
    p.add_argument("--t", type=_positive, default=1)
    p.add_argument("--N", type=_positive, default=20)
    p.add_argument("--a", default="id")
    p.add_argument("--form", choices=["printed", "stirling"], default="printed")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_derivative)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except IdentityViolation as exc:
        print(f"identity violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (LambertError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    persist_cache()
    return code


if __name__ == "__main__":
    sys.exit(main())
