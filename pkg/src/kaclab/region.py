"""The rotated root-of-unity grid of closed balls around the unit circle.

For ``n`` coefficients the ball radius is

    delta = 1 / (n**(1/p + e) * log(n)**(2*beta)),   e = 1/2 ("half") or 1/3 ("third"),

``N`` is the least integer with ``N * delta >= 2*pi``, the rotation step is
``alpha = 2*pi / N`` radians and ``m = ceil(N / n)``.  The centers are

    exp(i*(2*pi*k/n + l*alpha))   for k = 1..n-1, l = 0..m,

together with the unrotated points 1 and -1 (the latter only for even n).
Logarithms are natural.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from ._trig import unit_turns
from .errors import InvalidSizeError

log = logging.getLogger(__name__)

REGIMES = {"half": 0.5, "third": 1.0 / 3.0}


class GridPoint(NamedTuple):
    k: int
    l: int
    angle: float
    value: complex


@dataclass(frozen=True)
class RegionSpec:
    n: int
    p: float
    beta: float
    regime: str
    delta: float
    N: int
    alpha: float
    m: int
    g: float
    includes_half: bool

    @property
    def exponent(self) -> float:
        return REGIMES[self.regime]

    @property
    def threshold(self) -> float:
        """n**(-e) * log(n)**(-beta); equals g * delta."""
        return self.n ** (-self.exponent) * math.log(self.n) ** (-self.beta)

    @property
    def ball_count(self) -> int:
        return (1 + int(self.includes_half)) + (self.m + 1) * (self.n - 1)

    @property
    def N_closed_form(self) -> float:
        """The non-integer count 2*pi*n**(1/p+e)*log(n)**(2*beta), for cross-checking N."""
        return 2 * math.pi * self.n ** (1 / self.p + self.exponent) * math.log(self.n) ** (2 * self.beta)


def build_region_spec(n, p=1.0, beta=0.0, regime="half") -> RegionSpec:
    if n < 4:
        raise InvalidSizeError(f"region needs n >= 4, got {n}")
    if not p > 0:
        raise ValueError(f"exponent p must be positive, got {p}")
    if p > 1:
        raise ValueError(f"exponent p must be at most 1, got {p}")
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {sorted(REGIMES)}, got {regime!r}")
    e = REGIMES[regime]
    logn = math.log(n)
    delta = 1.0 / (n ** (1.0 / p + e) * logn ** (2 * beta))
    N = math.ceil(2 * math.pi / delta)
    while N * delta < 2 * math.pi:
        N += 1
    while N > 1 and (N - 1) * delta >= 2 * math.pi:
        N -= 1
    threshold = n ** (-e) * logn ** (-beta)
    spec = RegionSpec(
        n=int(n), p=float(p), beta=float(beta), regime=regime, delta=delta,
        N=int(N), alpha=2 * math.pi / N, m=-(-N // n), g=threshold / delta,
        includes_half=(n % 2 == 0),
    )
    log.debug("region n=%d: N=%d (closed form %.6g), m=%d, delta=%.6g",
              n, N, spec.N_closed_form, spec.m, delta)
    return spec


def grid_arrays(spec: RegionSpec):
    """Grid centers as arrays ``(k, l, angle, value)``.

    Order: the unrotated centers k=0 (and k=n/2 for even n) first, then
    layers l = 0..m, each with k = 1..n-1.
    """
    n, m = spec.n, spec.m
    ks = np.arange(1, n)
    special_k = np.array([0, n // 2] if spec.includes_half else [0])
    k = np.concatenate([special_k, np.tile(ks, m + 1)])
    l = np.concatenate([np.zeros(special_k.size, dtype=np.int64), np.repeat(np.arange(m + 1), n - 1)])
    turns = k / n + l / spec.N
    return k, l, 2 * np.pi * turns, unit_turns(turns)


def grid_points(spec: RegionSpec) -> Iterator[GridPoint]:
    k, l, angle, value = grid_arrays(spec)
    for row in zip(k.tolist(), l.tolist(), angle.tolist(), value.tolist()):
        yield GridPoint(*row)


def _nearest_angle_offset(spec, theta):
    """Smallest |theta - center angle| (mod 2*pi) over all grid centers."""
    n, m, alpha = spec.n, spec.m, spec.alpha
    theta = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
    step = 2 * np.pi / n
    base = np.floor(theta / step).astype(np.int64)
    best = np.full(theta.shape, np.inf)
    # layer arcs span m*alpha <= step + alpha, so only nearby k can be closest
    for shift in range(-2, 2):
        k = np.mod(base + shift, n)
        d = np.mod(theta - k * step, 2 * np.pi)
        lstar = np.clip(np.rint(d / alpha), 0, m)
        lstar = np.where(k == 0, 0, lstar)
        off = np.abs(d - lstar * alpha)
        off = np.minimum(off, 2 * np.pi - off)
        # l = 0 also checked directly for the wrap-around at d close to 2*pi
        off0 = np.minimum(d, 2 * np.pi - d)
        best = np.minimum(best, np.minimum(off, off0))
    if spec.includes_half:
        d = np.abs(np.mod(theta - np.pi, 2 * np.pi))
        best = np.minimum(best, np.minimum(d, 2 * np.pi - d))
    return best


def distance_to_centers(spec: RegionSpec, z):
    """Euclidean distance from each z to its nearest grid center."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    off = _nearest_angle_offset(spec, np.angle(z))
    # |z - e^{i phi}|^2 = (r - 1)^2 + 4 r sin^2(offset / 2)
    return np.sqrt((r - 1.0) ** 2 + 4.0 * r * np.sin(off / 2.0) ** 2)


def contains(spec: RegionSpec, z):
    """True where z lies in one of the closed balls of radius delta."""
    inside = distance_to_centers(spec, z) <= spec.delta
    return bool(inside) if inside.ndim == 0 else inside


def dump_csv(spec: RegionSpec, fh):
    fh.write("k,l,angle_rad,re,im\n")
    k, l, angle, value = grid_arrays(spec)
    for row in zip(k.tolist(), l.tolist(), angle.tolist(), value.real.tolist(), value.imag.tolist()):
        fh.write("%d,%d,%.17g,%.17g,%.17g\n" % row)


def render_svg(spec: RegionSpec, size=480, max_balls=20000, points=None, min_radius_px=0.6):
    """SVG picture of the region: unit circle, ball outlines and optional points.

    Balls are drawn to scale but never thinner than ``min_radius_px``.  When
    there are more than ``max_balls`` centers an evenly strided subset is drawn.
    """
    half = size / 2.0
    scale = 0.42 * size
    k, l, angle, value = grid_arrays(spec)
    stride = max(1, -(-value.size // max_balls))
    rad = max(spec.delta * scale, min_radius_px)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<!-- n={spec.n} p={spec.p!r} beta={spec.beta!r} regime={spec.regime} "
        f"delta={spec.delta:.6g} N={spec.N} m={spec.m} balls={value.size} drawn_every={stride} -->",
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{half:.3f}" cy="{half:.3f}" r="{scale:.3f}" fill="none" stroke="black" stroke-width="1.2"/>',
    ]
    for w in value[::stride]:
        x, y = half + scale * w.real, half - scale * w.imag
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{rad:.3f}" fill="none" '
                   f'stroke="steelblue" stroke-width="0.5"/>')
    if points is not None:
        for w in np.asarray(points, dtype=complex).ravel():
            x, y = half + scale * w.real, half - scale * w.imag
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="1.5" fill="crimson"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
