"""
The 2 x n frames behind the small-ball bound
============================================

Gram determinants, the image norm of V_k^T theta and its distance to the
integer lattice.
"""

import math

import numpy as np

from kaclab import dvk_threshold_check, gram_det, image_norm_sq, lattice_dist

for n, k in [(4, 1), (6, 3), (1024, 7), (1024, 512)]:
    print(f"det(V V^T) n={n:5d} k={k:4d}: {gram_det(n, k):.6g}   n^2/4 = {n * n / 4:g}")

# a phase shift eta keeps det close to n^2/4 unless k/n + eta lands near 0, 1/2 or 1
n = 256
for k in (1, 60, 127):
    print(f"n={n} k={k:3d}: det at eta=1/n is {gram_det(n, k, 1 / n):10.1f}")

# ||V_k^T theta||^2 is ||theta||^2 n/2 plus an oscillating term that is O(1)
# only while k/n + eta stays away from 0 and 1/2
theta = (3.0, 4.0)
for k, eta in [(250, 0.0004), (3, 0.0004)]:
    v = image_norm_sq(1000, k, eta, theta)
    print(f"n=1000 k={k:3d} eta={eta}: {v:.3f} vs 12500 (off by {v - 12500:.1f})")

# below radius 1/4 every entry of V_k^T theta rounds to 0, so the lattice
# distance is just r sqrt(n/2), under sqrt(n/32)
for r in (0.1, 0.2, 0.25, 0.3):
    d = lattice_dist(256, 5, (r, 0.0))
    print(f"r={r:.2f}: dist={d:.3f}, threshold sqrt(n/32)={math.sqrt(256 / 32):.3f}")
for r_min in (1 / 16, 0.25):
    res = dvk_threshold_check(256, 5, samples=10**4, r_min=r_min)
    print(f"r in [{res.r_min:.4f}, {res.r_max:.2f}]: {res.violations} violations, "
          f"min dist {res.min_dist:.3f}")
