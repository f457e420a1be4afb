"""
Where the roots are
===================

Aberth iteration for all roots, their distance to the circle, the angular
KS statistic and the number of roots that fall in the region.
"""

from pathlib import Path

import numpy as np

from kaclab import (CoefficientLaw, angular_ks, build_region_spec, find_roots, radial_stats,
                    region_root_count, sample_coefficients)
from kaclab.lab import run_root_atlas
from kaclab.roots import conjugate_mismatch, residual_certificate

law = CoefficientLaw.rademacher()
s = sample_coefficients(law, 1024, seed=0)
rs = find_roots(s)
st = radial_stats(rs)
print(f"n=1024: converged={rs.converged} in {rs.iterations} sweeps; "
      f"certificate={residual_certificate(s, rs)}; conj mismatch={conjugate_mismatch(rs.roots):.1e}")
print(f"median ||z|-1| = {st.median_dist:.2e}, max = {st.max_dist:.2e}, "
      f"within 10/n: {st.fraction_within(10 / 1024):.3f}")
print(f"angular KS = {angular_ks(rs):.4f} (5% critical value {1.36 / np.sqrt(1023):.4f})")

# heavy tails push a few roots far from the circle
p = sample_coefficients(CoefficientLaw.pareto(0.9), 1024, seed=0)
print(f"pareto(0.9): max ||z|-1| = {radial_stats(find_roots(p)).max_dist:.2e}")

for n in (128, 512):
    spec = build_region_spec(n, p=1, beta=1)
    counts = [region_root_count(find_roots(sample_coefficients(law, n, 3, t)), spec) for t in range(20)]
    print(f"n={n}: roots inside the region per sample: {counts}")

out = Path(__file__).with_name("demo_output") / "atlas"
rep = run_root_atlas(n=256, trials=8, seed=1, out=out)
print(f"atlas: mean KS {rep.mean_ks:.4f}; files in {out}")
