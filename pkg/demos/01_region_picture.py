"""
The zero-free region around the unit circle
===========================================

Builds the grid of closed balls for a few sizes, prints the parameters and
writes SVG pictures next to this script (``demo_output/``).
"""

import math
from pathlib import Path

import numpy as np

from kaclab import build_region_spec, contains
from kaclab.region import distance_to_centers, render_svg

out = Path(__file__).with_name("demo_output")
out.mkdir(exist_ok=True)

# a tiny grid first: n = 4, no log factor, so delta = 1/8 and N = ceil(16 pi)
spec = build_region_spec(4, p=1, beta=0)
print(f"n=4: delta={spec.delta}, N={spec.N}, alpha={spec.alpha:.5f} rad, m={spec.m}, "
      f"balls={spec.ball_count}")
(out / "region_n4.svg").write_text(render_svg(spec))

# the sizes used in experiments have tiny balls and many layers
for n in (64, 256, 1024):
    s = build_region_spec(n, p=1, beta=1)
    print(f"n={n:5d}: delta={s.delta:.3e}  N={s.N:>11d}  m={s.m:>8d}  balls={s.ball_count:>11d}  "
          f"threshold={s.threshold:.3e}  g={s.g:.3e}")

# rotated layers start at k = 1, so the arc from 1 to exp(2 pi i/n) is
# covered only within delta of z = 1
spec = build_region_spec(16, p=1, beta=0)
theta = np.linspace(0, 2 * math.pi, 20001)
inside = contains(spec, np.exp(1j * theta))
gap = theta[~inside]
print(f"n=16: {inside.mean():.4f} of the circle is covered; the uncovered arc is "
      f"[{gap.min():.4f}, {gap.max():.4f}] rad, inside (0, 2 pi/16 = {2 * math.pi / 16:.4f})")
print("largest distance from the rest of the circle to a center:",
      f"{distance_to_centers(spec, np.exp(1j * theta[theta >= 2 * math.pi / 16])).max():.4f}",
      f"<= delta = {spec.delta:.4f}")
(out / "region_n16.svg").write_text(render_svg(spec))
print("pictures written to", out)
