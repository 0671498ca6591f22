"""How far the continuous chi-squared approximation is from the exact law."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .approx import approx_p_value, binomial_cdf, chi2_cdf, normal_cdf
from .distribution import (ExactDistribution, chi2_from_s, exact_distribution,
                           exact_p_value)
from .engine import DEFAULT_MAX_CELLS, ResourceGuardError

SIDES = ("both", "jump")
METHODS = ("exact", "approx")


@dataclass(frozen=True)
class KsReport:
    """K-S distance between an exact step CDF and its continuous approximation.

    ``side`` is ``"right"`` when the supremum sits at the value of the step
    at ``s_at_sup`` and ``"left"`` when it is the left limit just before it.
    ``sides`` records the convention used: ``"both"`` is the true supremum
    over the real line, ``"jump"`` compares only at support points.
    """

    N: int
    n: int
    D: float
    s_at_sup: Optional[int]
    side: Optional[str]
    sides: str = "both"
    error: Optional[str] = None


@dataclass(frozen=True)
class ThresholdScanResult:
    n: int
    threshold: float
    first_N: Optional[int]
    trace: Tuple[Tuple[int, float], ...]
    sides: str = "both"


@dataclass(frozen=True)
class Type1Report:
    N: int
    n: int
    alpha: float
    method: str
    rejection_min_s: Optional[int]
    rate: Fraction
    strict: bool = True

    @property
    def rate_float(self) -> float:
        return float(self.rate)


@dataclass(frozen=True)
class BaselineReport:
    N: int
    p: float
    continuity_correction: bool
    D: float
    sides: str
    k_at_sup: int


@dataclass(frozen=True)
class NistRow:
    s: int
    chi2: Fraction
    pvalue_exact: Fraction
    pvalue_approx: float


@dataclass(frozen=True)
class NistReport:
    N: int
    n: int
    alpha: float
    rows: Tuple[NistRow, ...]
    type1_exact: Type1Report
    type1_approx: Type1Report


def _check_sides(sides: str):
    if sides not in SIDES:
        raise ValueError(f"sides must be one of {SIDES}, got {sides!r}")


def _step_sup(steps: Iterable[Tuple[int, float, float]],
              sides: str) -> Tuple[float, Optional[int], Optional[str]]:
    """Largest gap between a step CDF and a continuous CDF.

    ``steps`` yields ``(x, P(x), F(x))`` in ascending ``x``.
    Between two jumps the step function is flat and ``F`` is monotone, so the
    supremum over the line is attained at a jump, either at the step's value
    or at its left limit.
    """
    best, at, side = -1.0, None, None
    prev = 0.0
    for x, P, F in steps:
        d = abs(P - F)
        if d > best:
            best, at, side = d, x, "right"
        if sides == "both":
            d = abs(prev - F)
            if d > best:
                best, at, side = d, x, "left"
        prev = P
    return best, at, side


def ks_statistic(dist: ExactDistribution, sides: str = "both") -> KsReport:
    _check_sides(sides)
    N, n = dist.N, dist.n
    if n < 2:
        raise ValueError("the K-S statistic needs n >= 2 (at least one degree of freedom)")
    dof = n - 1
    total = dist.total
    # int/int true division rounds the exact ratio correctly, even for huge totals
    steps = ((s, cum / total, chi2_cdf(dof, (n * s) / N - N))
             for s, cum in zip(dist.support, dist.cumulative))
    D, at, side = _step_sup(steps, sides)
    return KsReport(N, n, D, at, side, sides)


def _ks_for_pair(pair: Tuple[int, int], sides: str, max_cells: int) -> KsReport:
    N, n = pair
    try:
        return ks_statistic(exact_distribution(N, n, max_cells=max_cells), sides)
    except ResourceGuardError as exc:
        return KsReport(N, n, math.nan, None, None, sides, error=str(exc))


def ratio_sweep(pairs: Sequence[Tuple[int, int]], sides: str = "both", *,
                workers: int = 1, max_cells: int = DEFAULT_MAX_CELLS) -> List[KsReport]:
    """K-S report per ``(N, n)`` pair, in input order."""
    _check_sides(sides)
    for N, n in pairs:
        if N < 1 or n < 2:
            raise ValueError(f"invalid pair ({N}, {n}): need N >= 1 and n >= 2")
    if workers <= 1:
        return [_ks_for_pair(p, sides, max_cells) for p in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_ks_for_pair, pairs, [sides] * len(pairs), [max_cells] * len(pairs)))


def threshold_first_N(n: int, threshold: float, N_max: int, sides: str = "both", *,
                      N_start: int = 1) -> ThresholdScanResult:
    """Scan ``N = N_start, N_start+1, ...`` for the first ``D(N, n) < threshold``."""
    _check_sides(sides)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    trace = []
    for N in range(N_start, N_max + 1):
        D = ks_statistic(exact_distribution(N, n), sides).D
        trace.append((N, D))
        if D < threshold:
            return ThresholdScanResult(n, threshold, N, tuple(trace), sides)
    return ThresholdScanResult(n, threshold, None, tuple(trace), sides)


def type1_error(dist: ExactDistribution, alpha: float, method: str = "exact",
                strict: bool = True) -> Type1Report:
    """Exact probability that the chosen p-value rule rejects a true null.

    Both p-values are nonincreasing in ``s``, so the rejection region is a
    tail of the support; its exact mass is the exact p-value of its first
    point.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if dist.n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    N, n = dist.N, dist.n
    a_exact = Fraction(alpha)
    tails = dist.tail_counts()

    def rejects(k: int) -> bool:
        if method == "exact":
            p = Fraction(tails[k], dist.total)
            return p < a_exact if strict else p <= a_exact
        p = approx_p_value(N, n, dist.support[k])
        return p < alpha if strict else p <= alpha

    # binary search for the first rejected index
    lo, hi = 0, len(dist.support)
    while lo < hi:
        mid = (lo + hi) // 2
        if rejects(mid):
            hi = mid
        else:
            lo = mid + 1
    if lo == len(dist.support):
        return Type1Report(N, n, alpha, method, None, Fraction(0), strict)
    return Type1Report(N, n, alpha, method, dist.support[lo],
                       Fraction(tails[lo], dist.total), strict)


def _type1_for_N(N: int, n: int, alpha: float, methods: Tuple[str, ...], strict: bool) -> List[Type1Report]:
    dist = exact_distribution(N, n)
    return [type1_error(dist, alpha, m, strict) for m in methods]


def type1_sweep(n: int, alpha: float, N_from: int, N_to: int,
                methods: Sequence[str] = METHODS, strict: bool = True, *,
                workers: int = 1) -> List[Type1Report]:
    """Type-I error rates for each ``N`` in ``N_from..N_to``, in ``N`` order."""
    Ns = list(range(N_from, N_to + 1))
    methods = tuple(methods)
    args = ([n] * len(Ns), [alpha] * len(Ns), [methods] * len(Ns), [strict] * len(Ns))
    if workers <= 1:
        chunks = map(_type1_for_N, Ns, *args)
        return [r for chunk in chunks for r in chunk]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for chunk in pool.map(_type1_for_N, Ns, *args) for r in chunk]


def nist_report(N: int = 55, n: int = 10, alpha: float = 1e-4,
                dist: Optional[ExactDistribution] = None) -> NistReport:
    """Support points where the approximate test rejects but the exact one does not.

    Defaults are the uniformity check applied to p-values in the NIST
    randomness test strategy: 55 p-values over 10 bins at level 1e-4.
    """
    if dist is None:
        dist = exact_distribution(N, n)
    a_exact = Fraction(alpha)
    rows = []
    for s in dist.support:
        p_approx = approx_p_value(N, n, s)
        if p_approx >= alpha:
            continue
        p_exact = exact_p_value(dist, s)
        if p_exact < a_exact:
            break
        rows.append(NistRow(s, chi2_from_s(N, n, s), p_exact, p_approx))
    return NistReport(N, n, alpha, tuple(rows),
                      type1_error(dist, alpha, "exact"), type1_error(dist, alpha, "approx"))


def binomial_normal_ks(N: int, p: float, continuity_correction: bool = True,
                       sides: Optional[str] = None) -> BaselineReport:
    """K-S distance between Binomial(N, p) and its normal approximation.

    With the continuity correction the normal CDF is read at ``k + 0.5`` and
    compared at the jumps only (``sides="jump"``), which is the convention
    under which the corrected approximation is meant to be used; without it
    the default is the supremum over the real line.
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    if N < 1:
        raise ValueError("N must be >= 1")
    if sides is None:
        sides = "jump" if continuity_correction else "both"
    _check_sides(sides)
    mean = N * p
    sd = math.sqrt(N * p * (1 - p))
    shift = 0.5 if continuity_correction else 0.0
    steps = ((k, binomial_cdf(N, p, k), normal_cdf(mean, sd, k + shift))
             for k in range(N + 1))
    D, at, _ = _step_sup(steps, sides)
    return BaselineReport(N, p, continuity_correction, D, sides, at)
