"""
Exact distribution of the chi-squared statistic
===============================================

Build the exact law of s = sum(x_i**2) for N=4 samples over n=4 bins and
compare it against full enumeration and Monte Carlo.
"""

from zds import (brute_force_distribution, chi2_from_s, exact_distribution,
                 monte_carlo_pmf)

N, n = 4, 4
dist = exact_distribution(N, n)
print("total sequences:", dist.total)
for s, c in zip(dist.support, dist.counts):
    print(f"s={s:3d}  chi2={str(chi2_from_s(N, n, s)):>5}  count={c:4d}  pmf={c / dist.total:.6f}")

# the dynamic program and naive enumeration agree count for count
print("matches enumeration:", dist == brute_force_distribution(N, n))

# a simulation lands within sampling error of the exact pmf
mc = monte_carlo_pmf(N, n, trials=200_000, seed=1)
for s in dist.support:
    print(f"s={s:3d}  exact={float(dist.pmf(s)):.5f}  simulated={mc.pmf.get(s, 0.0):.5f}")
