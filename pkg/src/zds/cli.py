"""Command-line front end.

Exit status: 0 success, 1 unreadable cache file, 2 usage error,
3 resource-guard refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import analysis
from .approx import approx_p_value
from .distribution import (ExactDistribution, chi2_from_s, exact_p_value, from_counts,
                           resolve_s)
from .engine import DEFAULT_MAX_CELLS, AbsDeviation, ResourceGuardError, SynthesisSpec, square, synthesize
from .fileio import DistributionFileError, resolve_cache, to_csv, to_json, write_atomic
from .oracle import brute_force_distribution, monte_carlo_pmf

EXIT_OK, EXIT_CACHE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


def _num(x) -> Optional[float]:
    """Round to 12 significant digits for display."""
    if x is None:
        return None
    return float(f"{float(x):.12g}")


def _emit(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=1) + "\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {text}")
    return value


def _contribution(stat: str, N: int, n: int):
    return square if stat == "chi2" else AbsDeviation(N, n)


def _distribution(args, N: int, n: int, stat: str = "chi2") -> ExactDistribution:
    def compute():
        spec = SynthesisSpec(N, n, contribution=_contribution(stat, N, n))
        return from_counts(synthesize(spec, workers=args.workers, max_cells=args.max_cells))

    cache = resolve_cache(args.cache_dir, args.no_cache)
    if cache is None:
        return compute()
    return cache.get_or_compute(N, n, stat, compute)


def _type1_json(r: analysis.Type1Report) -> dict:
    return {
        "N": r.N, "n": r.n, "alpha": r.alpha, "method": r.method, "strict": r.strict,
        "rejection_min_s": r.rejection_min_s,
        "rate": _num(r.rate), "rate_exact": str(r.rate),
    }


def cmd_dist(args) -> int:
    dist = _distribution(args, args.N, args.n, args.stat)
    text = to_json(dist) if args.format == "json" else to_csv(dist)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_pvalue(args) -> int:
    if args.n < 2 and args.method != "exact":
        raise ValueError("approximate p-values need n >= 2")
    dist = _distribution(args, args.N, args.n)
    s = resolve_s(dist, args.chi2) if args.chi2 is not None else args.s
    out = {"N": args.N, "n": args.n, "s": s, "chi2": str(chi2_from_s(args.N, args.n, s))}
    if args.method in ("exact", "both"):
        out["pvalue_exact"] = _num(exact_p_value(dist, s))
    if args.method in ("approx", "both"):
        out["pvalue_approx"] = _num(approx_p_value(args.N, args.n, s))
    _emit(out)
    return EXIT_OK


def cmd_ks(args) -> int:
    r = analysis.ks_statistic(_distribution(args, args.N, args.n), args.sides)
    _emit({"N": r.N, "n": r.n, "D": _num(r.D), "s_at_sup": r.s_at_sup, "side": r.side,
           "sides": r.sides})
    return EXIT_OK


def cmd_threshold(args) -> int:
    r = analysis.threshold_first_N(args.n, args.ks, args.max_N, args.sides)
    _emit({"n": r.n, "threshold": r.threshold, "sides": r.sides, "first_N": r.first_N,
           "trace": [[N, _num(D)] for N, D in r.trace]})
    return EXIT_OK


def _methods(method: str):
    return analysis.METHODS if method == "both" else (method,)


def cmd_type1(args) -> int:
    dist = _distribution(args, args.N, args.n)
    reports = [analysis.type1_error(dist, args.alpha, m, strict=not args.le)
               for m in _methods(args.method)]
    _emit([_type1_json(r) for r in reports])
    return EXIT_OK


def cmd_type1_sweep(args) -> int:
    if args.N_to < args.N_from:
        raise ValueError("--N-to must be >= --N-from")
    rows = analysis.type1_sweep(args.n, args.alpha, args.N_from, args.N_to,
                                _methods(args.method), strict=not args.le, workers=args.workers)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "n", "alpha", "method", "strict", "rejection_min_s", "rate", "rate_exact"])
    for r in rows:
        writer.writerow([r.N, r.n, repr(r.alpha), r.method, int(r.strict),
                         "" if r.rejection_min_s is None else r.rejection_min_s,
                         repr(_num(r.rate)), str(r.rate)])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_nist(args) -> int:
    report = analysis.nist_report(dist=_distribution(args, 55, 10))
    _emit({
        "N": report.N, "n": report.n, "alpha": report.alpha,
        "rows": [{"s": row.s, "chi2": str(row.chi2), "chi2_float": _num(row.chi2),
                  "pvalue_exact": _num(row.pvalue_exact), "pvalue_approx": _num(row.pvalue_approx)}
                 for row in report.rows],
        "type1_exact": _type1_json(report.type1_exact),
        "type1_approx": _type1_json(report.type1_approx),
    })
    return EXIT_OK


def cmd_oracle(args) -> int:
    brute = brute_force_distribution(args.N, args.n)
    engine = from_counts(synthesize(SynthesisSpec(args.N, args.n), max_cells=args.max_cells))
    verdict = "EQUAL" if brute == engine else "DIFFERENT"
    _emit({"N": args.N, "n": args.n, "total": str(brute.total),
           "counts": {str(s): str(c) for s, c in zip(brute.support, brute.counts)},
           "verdict": verdict})
    return EXIT_OK if verdict == "EQUAL" else EXIT_CACHE


def cmd_mc(args) -> int:
    r = monte_carlo_pmf(args.N, args.n, args.trials, args.seed)
    _emit({"N": r.N, "n": r.n, "trials": r.trials, "seed": r.seed, "generator": r.generator,
           "pmf": {str(s): _num(p) for s, p in r.pmf.items()}})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--cache-dir", help="distribution cache directory (default: $ZDS_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="bypass the distribution cache")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--max-cells", type=_positive, default=DEFAULT_MAX_CELLS,
                        help="resource guard: refuse tables above this many cells")

    parser = argparse.ArgumentParser(prog="zds", allow_abbrev=False,
                                     description="Exact chi-squared distributions for uniform histograms")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)
        p.set_defaults(func=func)
        return p

    def sizes(p, N=True):
        if N:
            p.add_argument("--N", type=_positive, required=True, help="sample size")
        p.add_argument("--n", type=_positive, required=True, help="number of bins")

    p = add("dist", cmd_dist, "write the exact distribution")
    sizes(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--stat", choices=("chi2", "absdev"), default="chi2")

    p = add("pvalue", cmd_pvalue, "p-value of an observed statistic")
    sizes(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chi2", type=float)
    g.add_argument("--s", type=int)
    p.add_argument("--method", choices=("exact", "approx", "both"), default="both")

    p = add("ks", cmd_ks, "K-S distance to the chi-squared approximation")
    sizes(p)
    p.add_argument("--sides", choices=analysis.SIDES, default="both")

    p = add("threshold", cmd_threshold, "first N whose K-S distance drops below a threshold")
    sizes(p, N=False)
    p.add_argument("--ks", type=_probability, default=0.02)
    p.add_argument("--max-N", dest="max_N", type=_positive, required=True)
    p.add_argument("--sides", choices=analysis.SIDES, default="both")

    p = add("type1", cmd_type1, "exact type-I error rate of a p-value rule")
    sizes(p)
    p.add_argument("--alpha", type=_probability, required=True)
    p.add_argument("--method", choices=("exact", "approx", "both"), default="both")
    p.add_argument("--le", action="store_true", help="reject when p <= alpha instead of p < alpha")

    p = add("type1-sweep", cmd_type1_sweep, "type-I error rates over a range of N (CSV)")
    sizes(p, N=False)
    p.add_argument("--alpha", type=_probability, required=True)
    p.add_argument("--N-from", dest="N_from", type=_positive, required=True)
    p.add_argument("--N-to", dest="N_to", type=_positive, required=True)
    p.add_argument("--method", choices=("exact", "approx", "both"), default="both")
    p.add_argument("--le", action="store_true")

    add("nist", cmd_nist, "NIST uniformity-of-p-values case (N=55, n=10, alpha=1e-4)")

    p = add("oracle", cmd_oracle, "brute-force distribution and comparison with the engine")
    sizes(p)

    p = add("mc", cmd_mc, "Monte Carlo empirical pmf of s")
    sizes(p)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"zds: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except DistributionFileError as exc:
        print(f"zds: corrupt cache file {exc}", file=sys.stderr)
        return EXIT_CACHE
    except ValueError as exc:
        print(f"zds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
