"""Continuous reference distributions.

The chi-squared CDF is the regularized lower incomplete gamma function
``P(dof/2, x/2)``, evaluated with the power series below the mean and the
Lentz continued fraction for the complement above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .distribution import chi2_from_s

MAX_ITER = 500
EPS = 1e-15
_TINY = 1e-300


def _log_prefactor(a: float, x: float) -> float:
    return a * math.log(x) - x - math.lgamma(a)


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
    term = total = 1.0 / a
    ap = a
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(_log_prefactor(a, x))
    raise ArithmeticError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _gamma_contfrac(a: float, x: float) -> float:
    # Q(a, x) by modified Lentz
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return math.exp(_log_prefactor(a, x)) * h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge for a={a}, x={x}")


def regularized_gamma_p(a: float, x: float) -> float:
    if a <= 0:
        raise ValueError("shape must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_contfrac(a, x))


def regularized_gamma_q(a: float, x: float) -> float:
    if a <= 0:
        raise ValueError("shape must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_contfrac(a, x))


def _check_chi2_args(dof: int, x: float):
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof}")
    if x < 0:
        raise ValueError(f"chi-squared CDF is defined for x >= 0, got {x}")


def chi2_cdf(dof: int, x: float) -> float:
    _check_chi2_args(dof, x)
    return regularized_gamma_p(dof / 2.0, x / 2.0)


def chi2_sf(dof: int, x: float) -> float:
    """Upper tail ``1 - chi2_cdf``, computed without cancellation."""
    _check_chi2_args(dof, x)
    return regularized_gamma_q(dof / 2.0, x / 2.0)


@dataclass(frozen=True)
class ApproxModel:
    dof: int
    eval_tolerance: float = 1e-12

    def __post_init__(self):
        if self.dof < 1:
            raise ValueError("dof must be >= 1")

    def cdf(self, x: float) -> float:
        return chi2_cdf(self.dof, x)

    def sf(self, x: float) -> float:
        return chi2_sf(self.dof, x)


def approx_p_value(N: int, n: int, s: int) -> float:
    """Classical p-value ``1 - F_{n-1}(chi2)`` for the integer statistic ``s``."""
    if n < 2:
        raise ValueError("n = 1 leaves zero degrees of freedom")
    chi2 = chi2_from_s(N, n, s)
    if chi2 < 0:
        raise ValueError(f"s={s} is below the smallest achievable value for N={N}, n={n}")
    return chi2_sf(n - 1, float(chi2))


def normal_cdf(mean: float, stddev: float, x: float) -> float:
    if not stddev > 0:
        raise ValueError(f"stddev must be positive, got {stddev}")
    return 0.5 * math.erfc(-(x - mean) / (stddev * math.sqrt(2.0)))


def binomial_cdf(N: int, p: float, k: int) -> float:
    """``P(X <= k)`` for ``X ~ Binomial(N, p)``, summed exactly.

    ``p`` is taken at its exact binary value ``a / 2**e``; the sum is one
    integer numerator over ``2**(e*N)``, rounded once at the end.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not 0 <= k <= N:
        raise ValueError(f"k must lie in [0, {N}], got {k}")
    frac = Fraction(p)
    a, d = frac.numerator, frac.denominator
    b = d - a
    num = sum(math.comb(N, j) * a ** j * b ** (N - j) for j in range(k + 1))
    return num / d ** N
