"""All roots of a sampled polynomial and where they sit relative to |z| = 1."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.stats

from .coefficients import PolynomialSample
from .errors import InvalidSizeError
from .region import RegionSpec, contains

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    iterations: int
    converged: bool
    degree: int
    tol: float

    def __len__(self):
        return self.roots.size


def _coeffs(sample):
    if isinstance(sample, PolynomialSample):
        return np.asarray(sample.coefficients, dtype=float)
    return np.asarray(sample, dtype=float)


def trim(coefficients):
    """Drop trailing (highest-degree) zero coefficients."""
    c = np.asarray(coefficients)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise InvalidSizeError("the zero polynomial has no root set")
    return c[: nz[-1] + 1]


def _horner_pair(desc, z):
    """p(z) and p'(z) for coefficients in descending order."""
    p = np.full(z.shape, desc[0], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for a in desc[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def newton_ratio(c, z):
    """p(z)/p'(z) for ascending coefficients c.

    Outside the unit disk the reversed polynomial q(w) = w**d p(1/w) is used,
    which keeps every Horner intermediate bounded:
    p/p' = z q(w) / (d q(w) - w q'(w)) with w = 1/z.
    """
    d = c.size - 1
    out = np.empty(z.shape, dtype=complex)
    inside = np.abs(z) <= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if inside.any():
            p, dp = _horner_pair(c[::-1], z[inside])
            out[inside] = p / dp
        if (~inside).any():
            zo = z[~inside]
            w = 1.0 / zo
            q, dq = _horner_pair(c, w)
            out[~inside] = zo * q / (d * q - w * dq)
    return out


def _scaled_values(c, z):
    """(|G(z)| / max(1, |z|)**d, log max(1, |z|)) without overflow, d = deg G."""
    d = c.size - 1
    out = np.empty(z.shape)
    logr = np.log(np.maximum(1.0, np.abs(z)))
    inside = np.abs(z) <= 1.0
    out[inside] = np.abs(_horner_pair(c[::-1], z[inside])[0])
    # |G(z)| = |z|**d |q(1/z)| with q the reversed polynomial
    out[~inside] = np.abs(_horner_pair(c, 1.0 / z[~inside])[0])
    return out, logr


def residuals(c, z):
    """|G(z)| for ascending coefficients c; inf only if it exceeds the float range."""
    c = np.asarray(c, dtype=float)
    scaled, logr = _scaled_values(c, np.asarray(z, dtype=complex))
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(scaled > 0, np.exp(np.log(scaled) + (c.size - 1) * logr), 0.0)


def initial_guesses(c):
    d = c.size - 1
    radius = abs(c[0] / c[-1]) ** (1.0 / d) if c[0] != 0 else 1.0
    if not np.isfinite(radius) or radius == 0:
        radius = 1.0
    angles = GOLDEN_ANGLE * np.arange(d) + 0.5 * GOLDEN_ANGLE
    return radius * np.exp(1j * angles)


def aberth(c, tol, max_iter):
    """Ehrlich-Aberth iteration; returns (roots, iterations, converged)."""
    d = c.size - 1
    z = initial_guesses(c)
    active = np.ones(d, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        zi = z[idx]
        ratio = newton_ratio(c, zi)
        diff = zi[:, None] - z[None, :]
        diff[np.arange(idx.size), idx] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        bad = ~np.isfinite(step)
        if bad.any():
            # p'(z) = 0 or coincident iterates: nudge off the critical point
            step[bad] = 1e-3 * np.maximum(1.0, np.abs(zi[bad])) * np.exp(1j * GOLDEN_ANGLE * (it + 1))
        z[idx] = zi - step
        done = np.abs(step) <= tol * np.maximum(1.0, np.abs(zi))
        active[idx[done]] = False
        if not active.any():
            return z, it, True
    return z, it, False


def find_roots(sample, tol=None, max_iter=200, method="aberth") -> RootSet:
    """Every root of sum_j xi_j z**j, trailing zero coefficients trimmed.

    ``method="companion"`` uses the companion-matrix eigenvalues (numpy.roots)
    instead, as an independent cross-check.
    """
    c_full = _coeffs(sample)
    c = trim(c_full)
    d = c.size - 1
    if d < 1:
        raise InvalidSizeError("polynomial has degree 0 after trimming")
    if tol is None:
        tol = 1e-12 * c_full.size
    if method == "aberth":
        z, it, ok = aberth(c, tol, max_iter)
    elif method == "companion":
        z, it, ok = np.roots(c[::-1]).astype(complex), 0, True
    else:
        raise ValueError(f"unknown method {method!r}")
    resid = residuals(c, z)
    return RootSet(z, resid, int(it), bool(ok), int(d), float(tol))


def residual_scale(sample, roots):
    """1 + sum_j |xi_j| * max(1, |root|)**(n-1) for each root (may overflow to inf)."""
    c = np.abs(_coeffs(sample))
    big = np.maximum(1.0, np.abs(roots))
    with np.errstate(over="ignore"):
        return 1.0 + c.sum() * big ** (c.size - 1)


def residual_certificate(sample, rs: RootSet, tol=None):
    """True when every |G_n(root)| <= tol * residual_scale.

    Both sides are divided by max(1, |root|)**(n-1) first, so roots far
    outside the unit disk do not overflow the comparison.
    """
    tol = rs.tol if tol is None else tol
    c_full = _coeffs(sample)
    c = trim(c_full)
    scaled, logr = _scaled_values(c, np.asarray(rs.roots, dtype=complex))
    # trimmed zeros raise the scale's exponent from deg G to n - 1
    extra = (c_full.size - c.size) * logr
    rhs = tol * (np.exp(-(c_full.size - 1) * logr) + np.abs(c_full).sum())
    return bool(np.all(scaled <= rhs * np.exp(extra)))


def conjugate_mismatch(roots):
    """Largest distance from a root's conjugate to its nearest root."""
    z = np.asarray(roots, dtype=complex)
    return float(np.max(np.min(np.abs(np.conj(z)[:, None] - z[None, :]), axis=1)))


@dataclass(frozen=True)
class RadialStats:
    distances: np.ndarray
    max_dist: float
    median_dist: float

    def fraction_within(self, w):
        return float(np.mean(self.distances <= w))


def radial_stats(rs) -> RadialStats:
    roots = rs.roots if isinstance(rs, RootSet) else np.asarray(rs, dtype=complex)
    d = np.abs(np.abs(roots) - 1.0)
    return RadialStats(d, float(d.max()), float(np.median(d)))


def unit_arguments(roots):
    """Root arguments mapped to [0, 1)."""
    u = np.mod(np.angle(np.asarray(roots, dtype=complex)) / (2 * np.pi), 1.0)
    return np.where(u >= 1.0, 0.0, u)


def angular_ks(rs) -> float:
    """Kolmogorov-Smirnov distance between the root arguments and Uniform[0, 2*pi)."""
    roots = rs.roots if isinstance(rs, RootSet) else rs
    return float(scipy.stats.kstest(unit_arguments(roots), "uniform").statistic)


def region_root_count(rs, spec: RegionSpec) -> int:
    roots = rs.roots if isinstance(rs, RootSet) else np.asarray(rs, dtype=complex)
    if roots.size == 0:
        return 0
    return int(np.count_nonzero(contains(spec, roots)))
