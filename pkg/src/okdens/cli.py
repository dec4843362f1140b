"""Command line interface.

Subcommands: field-info, check, density, experiment, sweep, brute.  All emit
JSON on stdout, except sweep with --csv which writes the CSV schema to the
given path.  Exit status: 0 success (for check: unimodular), 3 for a clean
"not unimodular" verdict from check, 2 for any error (bad input, budget or
factorization limits, unreadable files), with a one-line diagnostic on
stderr.

The default experiment/sweep seed is 0, overridable by the OKDENS_SEED
environment variable and, with highest precedence, the --seed flag.
"""

import argparse
import json
import os
import sys

from .errors import OkdensError
from .fieldcore import Maximality, parse_field
from .montecarlo import (brute_force_density, run_experiment, sweep_bounds,
                         write_sweep_csv)
from .splitting import split_prime
from .unimodular import (is_unimodular, is_unimodular_modp, matrix_from_json)
from .zeta import DEFAULT_PRIME_BOUND, predicted_density
from .primes import sieve_primes

SEED_ENV_VAR = "OKDENS_SEED"


def _add_field_args(sp):
    sp.add_argument("--field", required=True,
                    help="field alias (Q, Q(sqrt2), x^3+x+1, x^5-13x-7) or "
                         "comma-separated monic coefficients, constant first")
    sp.add_argument("--assume-irreducible", action="store_true",
                    help="accept the defining polynomial without an irreducibility certificate")
    sp.add_argument("--allow-nonmaximal", action="store_true",
                    help="proceed when Z[theta] may not be the maximal order (recorded in reports)")


def _parse_field_args(args):
    return parse_field(args.field, assume_irreducible=args.assume_irreducible,
                       allow_nonmaximal=args.allow_nonmaximal)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if raw:
        return int(raw, 0)
    return 0


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="okdens",
                                 description="Unimodular matrix densities over rings of "
                                             "integers of monogenic number fields")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field-info", help="validate a field and show its splitting data")
    _add_field_args(sp)
    sp.add_argument("--show-primes", type=int, default=0, metavar="N",
                    help="also list the splitting of the first N primes")

    sp = sub.add_parser("check", help="decide unimodularity of a matrix from JSON")
    sp.add_argument("--matrix", required=True,
                    help="path to a matrix JSON file, or - for stdin")
    sp.add_argument("--method", choices=("hnf", "modp", "both"), default="hnf")
    sp.add_argument("--with-index", action="store_true",
                    help="attach the HNF-computed index to a modp report")
    sp.add_argument("--assume-irreducible", action="store_true")
    sp.add_argument("--allow-nonmaximal", action="store_true")

    sp = sub.add_parser("density", help="predicted density from the truncated Euler product")
    _add_field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)

    sp = sub.add_parser("experiment", help="seeded Monte-Carlo experiment")
    _add_field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--bound", type=int, default=3, help="box half-width B")
    sp.add_argument("--samples", type=int, default=50000)
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                    help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)

    sp = sub.add_parser("sweep", help="experiments over a range of box half-widths")
    _add_field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--b-start", type=int)
    sp.add_argument("--b-end", type=int)
    sp.add_argument("--b-step", type=int, default=1)
    sp.add_argument("--b-list", type=str, default=None,
                    help="explicit comma-separated bounds (overrides start/end/step)")
    sp.add_argument("--samples", type=int, default=50000)
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    sp.add_argument("--csv", type=str, default=None,
                    help="write rows as CSV to this path instead of JSON to stdout")

    sp = sub.add_parser("brute", help="exact density by exhausting the coordinate box")
    _add_field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)

    return ap


def _cmd_field_info(args) -> int:
    field = _parse_field_args(args)
    out = {
        "coeffs": list(field.coeffs),
        "degree": field.degree,
        "disc": field.disc,
        "maximality": {
            "status": field.maximality.value,
            "checked_primes": list(field.checked_primes),
        },
        "irreducibility_witness": field.irreducibility_witness,
    }
    if field.warnings:
        out["warnings"] = list(field.warnings)
    if args.show_primes > 0:
        allow = field.maximality is Maximality.ASSUMED_BY_USER
        splits = []
        for p in sieve_primes(_nth_prime_bound(args.show_primes))[:args.show_primes]:
            split = split_prime(field, int(p), allow_unverified=allow)
            splits.append({
                "p": int(p),
                "factors": [{"g": list(g.coeffs), "deg": g.degree(), "e": e}
                            for g, e in split.factors],
            })
        out["splits"] = splits
    _emit(out)
    return 0


def _nth_prime_bound(count: int) -> int:
    import math
    if count < 6:
        return 15
    ln = math.log(count)
    return int(count * (ln + math.log(ln))) + 10


def _cmd_check(args) -> int:
    if args.matrix == "-":
        obj = json.load(sys.stdin)
    else:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    mat = matrix_from_json(obj, assume_irreducible=args.assume_irreducible,
                           allow_nonmaximal=args.allow_nonmaximal)
    if args.method == "hnf":
        report = is_unimodular(mat)
        _emit(report.to_json_dict())
        return 0 if report.verdict else 3
    if args.method == "modp":
        report = is_unimodular_modp(mat, with_index=args.with_index)
        _emit(report.to_json_dict())
        return 0 if report.verdict else 3
    rh = is_unimodular(mat)
    rm = is_unimodular_modp(mat, with_index=args.with_index)
    _emit({"hnf": rh.to_json_dict(), "modp": rm.to_json_dict(),
           "agree": rh.verdict == rm.verdict})
    return 0 if rh.verdict else 3


def _cmd_density(args) -> int:
    field = _parse_field_args(args)
    result = predicted_density(field, args.n, args.m, args.prime_bound)
    out = result.to_json_dict()
    out["field"] = list(field.coeffs)
    if field.warnings:
        out["warnings"] = list(field.warnings)
    _emit(out)
    return 0


def _cmd_experiment(args) -> int:
    field = _parse_field_args(args)
    seed = args.seed if args.seed is not None else _default_seed()
    report = run_experiment(field, args.n, args.m, args.bound, args.samples, seed,
                            workers=args.workers, prime_bound=args.prime_bound)
    _emit(report.to_json_dict())
    return 0


def _cmd_sweep(args) -> int:
    field = _parse_field_args(args)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.b_list:
        bounds = [int(part.strip()) for part in args.b_list.split(",")]
    else:
        if args.b_start is None or args.b_end is None:
            raise ValueError("sweep needs --b-start and --b-end (or --b-list)")
        if args.b_step < 1:
            raise ValueError("--b-step must be >= 1")
        bounds = list(range(args.b_start, args.b_end + 1, args.b_step))
    if not bounds:
        raise ValueError("sweep bound range is empty")
    reports = sweep_bounds(field, args.n, args.m, bounds, args.samples, seed,
                           workers=args.workers, prime_bound=args.prime_bound)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(reports, fh)
        print(f"wrote {len(reports)} rows to {args.csv}", file=sys.stderr)
    else:
        _emit([r.to_json_dict() for r in reports])
    return 0


def _cmd_brute(args) -> int:
    field = _parse_field_args(args)
    frac = brute_force_density(field, args.n, args.m, args.bound)
    k = field.degree
    total = (2 * args.bound) ** (args.n * args.m * k)
    _emit({
        "field": list(field.coeffs),
        "n": args.n,
        "m": args.m,
        "B": args.bound,
        "total": total,
        "hits": int(frac * total),
        "rational": f"{frac.numerator}/{frac.denominator}",
        "decimal": float(frac),
    })
    return 0


_DISPATCH = {
    "field-info": _cmd_field_info,
    "check": _cmd_check,
    "density": _cmd_density,
    "experiment": _cmd_experiment,
    "sweep": _cmd_sweep,
    "brute": _cmd_brute,
}


# flags whose value may begin with "-" (coefficient lists, seeds); rewritten
# to --flag=value so argparse does not mistake the value for an option
_VALUE_FLAGS = ("--field", "--matrix", "--b-list", "--csv", "--seed")


def _merge_dash_values(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt is not None and len(nxt) > 1 and nxt[0] == "-":
            out.append(tok + "=" + nxt)
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_merge_dash_values(list(argv)))
    try:
        return _DISPATCH[args.command](args)
    except (OkdensError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
