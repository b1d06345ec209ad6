"""Observability probe: the Hautus constant stays bounded in frequency.

For the Dirichlet wave problem on the disk (whole boundary observed, so
the geometric control condition is immediate) the inequality

    ||w||_{H^1_h} <= M h^{-1} ||(-h^2 Lap - 1) w|| + m h ||d_nu w||

holds with h-independent constants.  The probe estimates the constant
empirically on smoothed random fields across two decades of frequency.

Run:  python3 demos/demo_hautus.py
"""

import numpy as np

from wentzell_disk.discretize import hautus_probe

lambdas = np.geomspace(5.0, 100.0, 8)
print("Probing 100 random Dirichlet fields per frequency, N = 2000 ...")
report = hautus_probe(lambdas, 2000, 100, seed=1)

print("\n  lambda     max ratio")
for lam, ratio in zip(report.lambdas, report.max_ratios):
    print(f"  {lam:8.2f}   {ratio:.6f}")

print(f"\nreference (smallest lambda): {report.reference:.6f}")
print(f"overall max / reference     : {report.overall_max / report.reference:.2f}"
      f"  (bounded within a decade: {report.ok})")
