"""The 2 x n frequency frames V_k and the identities the small-ball argument uses.

Column j of V_k is (cos(2*pi*j*x), sin(2*pi*j*x)) with x = k/n + eta.  At
eta = 0 and 2k != 0 (mod n) the Gram matrix V_k V_k^T is exactly
(n/2) * I, so det = n**2 / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import _rng
from ._trig import cos_sin_turns
from .errors import DomainError


@dataclass(frozen=True)
class FrequencyFrame:
    n: int
    k: int
    eta: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.eta <= 1.0 / self.n:
            raise ValueError(f"eta must lie in [0, 1/n], got {self.eta}")

    @cached_property
    def rows(self) -> np.ndarray:
        j = np.arange(self.n, dtype=np.int64)
        # integer reduction keeps eta = 0 frames exact at quarter turns
        turns = ((j * self.k) % self.n) / self.n + j * self.eta
        c, s = cos_sin_turns(turns)
        rows = np.vstack([c, s])
        rows.setflags(write=False)
        return rows

    @property
    def gcd(self):
        return math.gcd(self.n, self.k)

    @property
    def n_reduced(self):
        """n' = n / gcd(n, k)."""
        return self.n // self.gcd

    @property
    def k_reduced(self):
        return self.k // self.gcd

    def image(self, theta):
        """V_k^T theta as an n-vector."""
        th = np.asarray(theta, dtype=float)
        return th[0] * self.rows[0] + th[1] * self.rows[1]


def gram_matrix(n, k, eta=0.0):
    V = FrequencyFrame(n, k, eta).rows
    a = math.fsum(V[0] * V[0])
    b = math.fsum(V[0] * V[1])
    c = math.fsum(V[1] * V[1])
    return np.array([[a, b], [b, c]])


def gram_det(n, k, eta=0.0):
    """det(V_k V_k^T) with compensated sums in ascending j."""
    if n < 3:
        raise ValueError("n must be at least 3")
    G = gram_matrix(n, k, eta)
    return G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]


def image_norm_sq(n, k, eta, theta):
    """||V_k^T theta||^2."""
    if n < 3:
        raise ValueError("n must be at least 3")
    v = FrequencyFrame(n, k, eta).image(theta)
    return math.fsum(v * v)


def lattice_dist(n, k, theta, eta=0.0):
    """Distance from V_k^T theta to the nearest point of Z^n."""
    if n < 3:
        raise ValueError("n must be at least 3")
    v = FrequencyFrame(n, k, eta).image(theta)
    r = v - np.rint(v)
    return math.sqrt(math.fsum(r * r))


def default_L(q):
    """L = sqrt(16 / q), the smallest admissible lattice tolerance for a given q."""
    if not q > 0:
        raise ValueError("q must be positive")
    return math.sqrt(16.0 / q)


class DvkCheck(NamedTuple):
    violations: int
    min_dist: float
    threshold: float
    r_min: float
    r_max: float
    samples: int
    # D(V) >= 1/(2 max column norm); columns of V_k are unit vectors
    column_norm_bound: float


def dvk_threshold_check(n, k, samples=10**4, seed=0, r_min=None) -> DvkCheck:
    """Sample theta = r (cos a, sin a) with r up to n'/(8 pi) and test
    lattice_dist(V_k^T theta) >= sqrt(n/32).

    ``a`` is uniform on [0, 2*pi) and ``r`` uniform on [r_min, n'/(8*pi)];
    ``r_min`` defaults to 1/sqrt(n).
    """
    if n < 64:
        raise ValueError("n must be at least 64")
    if not 1 <= k <= n - 1 or 2 * k == n:
        raise DomainError(f"k={k} is excluded (k must avoid 0 and n/2)")
    frame = FrequencyFrame(n, k)
    r_max = frame.n_reduced / (8.0 * math.pi)
    if r_min is None:
        r_min = 1.0 / math.sqrt(n)
    if r_min > r_max:
        raise DomainError(f"empty radius range [{r_min}, {r_max}] for n={n}, k={k}")
    rng = _rng.generator(seed, k)
    a = rng.uniform(0.0, 2.0 * math.pi, samples)
    r = rng.uniform(r_min, r_max, samples)
    thresh = math.sqrt(n / 32.0)
    min_dist = math.inf
    violations = 0
    batch = max(1, (1 << 21) // n)
    for s0 in range(0, samples, batch):
        s1 = min(samples, s0 + batch)
        th = np.stack([r[s0:s1] * np.cos(a[s0:s1]), r[s0:s1] * np.sin(a[s0:s1])], axis=1)
        v = th @ frame.rows
        d = np.sqrt(np.sum((v - np.rint(v)) ** 2, axis=1))
        violations += int(np.count_nonzero(d < thresh))
        min_dist = min(min_dist, float(d.min()))
    return DvkCheck(violations, min_dist, thresh, float(r_min), float(r_max), int(samples),
                    0.5 / float(np.max(np.hypot(*frame.rows))))


def verify_table(ns=(8, 12, 64, 257, 1024), rel_tol=1e-6):
    """Rows (check, n, k, value, expected, ok) for the exact Gram identities."""
    rows = []
    for n in ns:
        for k in range(1, n):
            det = gram_det(n, k)
            if 2 * k % n == 0:
                expected = 0.0
                ok = abs(det) <= rel_tol * n * n
            else:
                expected = n * n / 4.0
                ok = abs(det - expected) <= rel_tol * expected
            rows.append(("gram_det", n, k, det, expected, ok))
    return rows
