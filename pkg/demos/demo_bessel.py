"""Bessel evaluation kernel: branches, accuracy, zeros.

Run:  python3 demos/demo_bessel.py
"""

import numpy as np

from wentzell_disk.bessel import (
    BesselEvaluator,
    McMahonSeed,
    bessel_j,
    bessel_j_prime,
    bessel_zero,
    hankel_j0,
)

print("Point values (series branch):")
print(f"  J0(1.0)  = {bessel_j(0, 1.0).real:.15f}")
print(f"  J0'(1.0) = {bessel_j_prime(0, 1.0).real:.15f}")
print(f"  J2(3+1j) = {bessel_j(2, 3 + 1j):.12f}")

print("\nBranch overlap on the annulus 10 <= |z| <= 20:")
z = 15.0 + 0.7j
series = bessel_j(0, z, BesselEvaluator(switch_radius=25.0, series_terms=90))
hank = hankel_j0(z, BesselEvaluator(switch_radius=10.0))
print(f"  J0({z}) series {series:.15f}")
print(f"           hankel {hank:.15f}")
print(f"  |difference| = {abs(series - hank):.2e}")

print("\nZeros of J0 from McMahon seeds (spacing -> pi):")
for k in (1, 2, 5, 20, 100):
    seed = McMahonSeed(k)
    alpha = bessel_zero(k)
    print(f"  k={k:3d}  seed {seed.seed_value:14.8f} -> zero {alpha:16.12f}"
          f"  (moved {abs(alpha - seed.seed_value):.2e})")
gaps = np.diff([bessel_zero(k) for k in range(1, 22)])
print(f"  gap range over k <= 21: [{gaps.min():.6f}, {gaps.max():.6f}]")
