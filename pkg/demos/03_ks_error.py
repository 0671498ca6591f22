"""
Approximation error as a K-S distance
=====================================

The K-S distance between the exact step CDF and the chi-squared CDF, for a
few sizes and for both conventions: the supremum over the whole real line
and the comparison at the jump points only.
"""

import numpy as np

from zds import exact_distribution, ks_statistic, ratio_sweep

for N, n in [(1, 2), (4, 4), (20, 4), (55, 10)]:
    dist = exact_distribution(N, n)
    both = ks_statistic(dist)
    jump = ks_statistic(dist, sides="jump")
    print(f"N={N:3d} n={n:3d}  real-line D={both.D:.5f}  jump-only D={jump.D:.5f}")

# fixed ratio N/n = 2: plot-ready rows
pairs = [(2 * n, n) for n in range(2, 21, 2)]
rows = ratio_sweep(pairs, sides="jump")
table = np.array([(r.N, r.n, r.D) for r in rows])
print("\n  N   n   D")
for N, n, D in table:
    print(f"{int(N):3d} {int(n):3d}  {D:.5f}")
