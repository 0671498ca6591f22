"""Exact distribution of Pearson's chi-squared statistic for uniform histograms.

The engine builds exact integer counts of bin-assignment sequences one bin
at a time; everything else (exact p-values, K-S distances to the continuous
approximation, type-I error rates) is derived from those counts.
"""

from .analysis import (BaselineReport, KsReport, NistReport, ThresholdScanResult, Type1Report,
                       binomial_normal_ks, ks_statistic, nist_report, ratio_sweep,
                       threshold_first_N, type1_error, type1_sweep)
from .approx import (ApproxModel, approx_p_value, binomial_cdf, chi2_cdf, chi2_sf,
                     normal_cdf)
from .distribution import (ExactDistribution, chi2_from_s, exact_cdf, exact_distribution,
                           exact_p_value, from_counts, resolve_s, reuse_subdistribution,
                           s_from_chi2, support_bounds)
from .engine import (AbsDeviation, CountLayer, CountTable, ResourceGuardError, SynthesisSpec,
                     advance_layer, binomial_coefficient, init_first_layer, square, synthesize)
from .oracle import brute_force_distribution, monte_carlo_pmf

__version__ = "0.1.0"
