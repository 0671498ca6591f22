"""
Reusing one table, capping it, and tracking another statistic
=============================================================

One run for (N, n) also holds the distribution of every smaller (M, m).
A cap on s keeps only the lower part of the table.  Swapping the per-bin
contribution gives the exact law of other additive statistics.
"""

from zds import (AbsDeviation, SynthesisSpec, exact_distribution, from_counts,
                 reuse_subdistribution, synthesize)

table = synthesize(SynthesisSpec(12, 5, retain_layers=True))
sub = reuse_subdistribution(table, 7, 3)
print("reused (7, 3) equals direct run:", sub.pmf_dict() == exact_distribution(7, 3).pmf_dict())

capped = synthesize(SynthesisSpec(12, 5, s_cap=40)).final_counts()
print("counts for s <= 40:", capped)

absdev = from_counts(synthesize(SynthesisSpec(12, 5, contribution=AbsDeviation(12, 5))))
print("sum |5 x_i - 12| support:", absdev.support)
