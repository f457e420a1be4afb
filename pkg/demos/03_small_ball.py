"""
Small-ball probabilities of a single Fourier coefficient
========================================================

P(|S_{n,k}| <= t) for Rademacher signs: exact small cases, the 1/n decay at
fixed t, and a calibrated envelope C1/n (t/sqrt(2) + C2 gcd(n,k)/n)^2.
"""

import math

from kaclab import CoefficientLaw, fit_scaling, mc_small_ball
from kaclab.lab import derived_seed
from kaclab.smallball import (calibrate_constants, dominated, gcd_census, ks_per_gcd_class,
                              small_ball_table, with_bounds)

law = CoefficientLaw.rademacher()

# n = 2, k = 1: S = xi_0 - xi_1 is 0 half of the time
e = mc_small_ball(law, 2, 1, 1.0, trials=10**5)
print(f"n=2: p_hat={e.p_hat:.4f} +- {e.ci_halfwidth:.4f} (exact 0.5)")
e = mc_small_ball(law, 4, 0, 0.5, trials=10**5)
print(f"n=4, k=0: p_hat={e.p_hat:.4f} +- {e.ci_halfwidth:.4f} (exact 0.375)")

# decay in n at k = 1, t = 1
ests = [mc_small_ball(law, n, 1, 1.0, trials=5 * 10**4, seed=derived_seed(0, n))
        for n in (64, 128, 256, 512, 1024)]
for e in ests:
    print(f"  n={e.n:5d}  p_hat={e.p_hat:.5f}  hits={e.hits}")
fit = fit_scaling(ests)
print(f"log-log slope {fit.slope:.3f} (r2 {fit.r2:.3f})")

# calibrate the two constants on small n, then check a larger n
ts = [0.5, 1.0, 2.0]
calib = []
for n in (64, 256):
    calib += small_ball_table(law, n, ks_per_gcd_class(n), ts, 2 * 10**4, derived_seed(0, n, 1))
consts = calibrate_constants(calib)
print(f"C1={consts.C1:.3f}, C2={consts.C2:.3f}")
check = with_bounds(small_ball_table(law, 1024, ks_per_gcd_class(1024), ts, 2 * 10**4,
                                     derived_seed(0, 1024, 2)), consts)
print(f"n=1024: {sum(dominated(e) for e in check)}/{len(check)} cells under the envelope")

# how many k have a large gcd with n
for n in (12, 720, 96864):
    thr = n ** (2 / 3) * math.log(n)
    c = gcd_census(n, thr)
    print(f"n={n}: {c.count} k with gcd > {thr:.1f}; reference bound {n ** (1 / 3) / math.log(n):.3f}")
