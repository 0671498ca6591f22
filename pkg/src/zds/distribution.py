"""Exact distributions of the integer statistic and exact p-values."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from .engine import (DEFAULT_MAX_CELLS, CountTable, SynthesisSpec, square,
                     synthesize)

#: relative tolerance used when snapping a real chi-squared value to an integer s
S_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ExactDistribution:
    """Exact pmf of ``s`` stored as integer counts over an integer total.

    ``support`` is strictly ascending and ``cumulative[k]`` is the sum of
    ``counts[:k+1]``.
    """

    N: int
    n: int
    support: Tuple[int, ...]
    counts: Tuple[int, ...]
    total: int
    statistic: str = "chi2"
    cumulative: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.support) != len(self.counts) or not self.support:
            raise ValueError("support and counts must be nonempty and of equal length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly ascending")
        if any(c <= 0 for c in self.counts):
            raise ValueError("all stored counts must be positive")
        cum = []
        acc = 0
        for c in self.counts:
            acc += c
            cum.append(acc)
        if acc != self.total:
            raise ValueError(f"counts sum to {acc}, expected total {self.total}")
        object.__setattr__(self, "cumulative", tuple(cum))

    def __len__(self) -> int:
        return len(self.support)

    @property
    def s_min(self) -> int:
        return self.support[0]

    @property
    def s_max(self) -> int:
        return self.support[-1]

    def pmf(self, s: int) -> Fraction:
        k = bisect_left(self.support, s)
        if k < len(self.support) and self.support[k] == s:
            return Fraction(self.counts[k], self.total)
        return Fraction(0)

    def pmf_dict(self) -> Dict[int, Fraction]:
        return {s: Fraction(c, self.total) for s, c in zip(self.support, self.counts)}

    def count_dict(self) -> Dict[int, int]:
        return dict(zip(self.support, self.counts))

    def tail_counts(self) -> Tuple[int, ...]:
        """``tail[k]`` = total mass (as a count) of support points >= support[k]."""
        return tuple(self.total - c + n for c, n in zip(self.cumulative, self.counts))


def _from_row(N: int, n: int, row: Dict[int, int], total: int, statistic: str) -> ExactDistribution:
    items = sorted((s, c) for s, c in row.items() if c)
    return ExactDistribution(N, n, tuple(s for s, _ in items), tuple(c for _, c in items),
                             total, statistic)


def from_counts(table: CountTable) -> ExactDistribution:
    spec = table.spec
    if spec.s_cap is not None:
        raise ValueError("capped tables hold an incomplete distribution")
    if table.final_layer.bin_index != spec.n:
        raise ValueError("table's final layer does not cover all bins")
    return _from_row(spec.N, spec.n, table.final_counts(), spec.n ** spec.N, spec.statistic)


def reuse_subdistribution(table: CountTable, M: int, m: int) -> ExactDistribution:
    """Distribution for ``M`` samples over ``m`` bins read off a larger table.

    The row ``C(m, M, .)`` accumulates all ``C(N, M)`` subsamples, so the
    normalizer is ``m**M * C(N, M)``.
    """
    spec = table.spec
    if table.retained_layers is None:
        raise ValueError("count reuse needs a table built with retain_layers=True")
    if spec.s_cap is not None:
        raise ValueError("capped tables hold an incomplete distribution")
    if not (1 <= m <= spec.n and 0 <= M <= spec.N):
        raise ValueError(f"need 1 <= m <= {spec.n} and 0 <= M <= {spec.N}, got m={m}, M={M}")
    layer = table.retained_layers[m - 1]
    return _from_row(M, m, layer.row(M), m ** M * math.comb(spec.N, M), spec.statistic)


def exact_distribution(N: int, n: int, *, workers: int = 1,
                       max_cells: int = DEFAULT_MAX_CELLS, contribution=square) -> ExactDistribution:
    """Convenience wrapper: synthesize and normalize in one call."""
    spec = SynthesisSpec(N, n, contribution=contribution)
    return from_counts(synthesize(spec, workers=workers, max_cells=max_cells))


def chi2_from_s(N: int, n: int, s: int) -> Fraction:
    return Fraction(n * s, N) - N


def s_from_chi2(N: int, n: int, chi2: float) -> Union[int, Tuple[int, int]]:
    """Invert ``chi2 = n*s/N - N``.

    Returns the integer ``s`` when the implied value is integral to within
    a relative ``1e-9``, otherwise the bracketing pair ``(floor, ceil)``.
    """
    if isinstance(chi2, Fraction):
        exact = (chi2 + N) * N / n
        if exact.denominator == 1:
            return int(exact)
        return math.floor(exact), math.ceil(exact)
    s_star = (chi2 + N) * N / n
    nearest = round(s_star)
    if abs(s_star - nearest) <= S_TOLERANCE * max(1.0, abs(s_star)):
        return int(nearest)
    return math.floor(s_star), math.ceil(s_star)


def resolve_s(dist: ExactDistribution, chi2: float) -> int:
    """Smallest achievable ``s`` at or above the one implied by ``chi2``."""
    s_star = (chi2 + dist.N) * dist.N / dist.n
    lowest = s_star - S_TOLERANCE * max(1.0, abs(s_star))
    k = bisect_left(dist.support, math.ceil(lowest))
    if k == len(dist.support):
        raise ValueError(
            f"chi2={chi2} implies s={s_star:.6f}, above the largest achievable s={dist.s_max}"
        )
    return dist.support[k]


def exact_cdf(dist: ExactDistribution, s: int) -> Fraction:
    k = bisect_right(dist.support, s)
    if k == 0:
        return Fraction(0)
    return Fraction(dist.cumulative[k - 1], dist.total)


def exact_p_value(dist: ExactDistribution, s: int) -> Fraction:
    """Exact upper-tail probability ``P(S >= s)`` for an achievable ``s``."""
    k = bisect_left(dist.support, s)
    if k == len(dist.support) or dist.support[k] != s:
        below = dist.support[k - 1] if k > 0 else None
        above = dist.support[k] if k < len(dist.support) else None
        raise ValueError(
            f"s={s} is not achievable for N={dist.N}, n={dist.n}; "
            f"nearest achievable values are {below} and {above}"
        )
    before = dist.cumulative[k - 1] if k > 0 else 0
    return Fraction(dist.total - before, dist.total)


def support_bounds(N: int, n: int) -> Tuple[int, int]:
    if N < 1 or n < 1:
        raise ValueError("N and n must be positive")
    q, r = divmod(N, n)
    return r * (q + 1) ** 2 + (n - r) * q * q, N * N
