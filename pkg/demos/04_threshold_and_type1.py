"""
First N below a K-S threshold, and type-I error over N
======================================================

How large must N be before the approximation error falls below 0.02, and how
does the rejection rate of the approximate test compare to alpha as N grows?
"""

from zds import threshold_first_N, type1_sweep

for n in (3, 4, 5):
    scan = threshold_first_N(n, 0.02, 400, sides="jump")
    print(f"n={n}: K-S < 0.02 first at N={scan.first_N}")

print("\n N   method  rate (alpha=1e-4)")
for r in type1_sweep(10, 1e-4, 50, 70):
    print(f"{r.N:3d}  {r.method:6s}  {r.rate_float:.3e}")
