"""Small-ball probabilities P(|S_{n,k}| <= t) for S_{n,k} = sum_j xi_j exp(2*pi*i*k*j/n).

Monte Carlo estimates share samples across every (k, t) cell of one n, so an
estimate is monotone in t for a fixed seed.  Trial i always uses the same
coefficients as ``sample_coefficients(law, n, seed, i)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
import scipy.stats

from ._trig import cos_sin_turns
from .errors import DomainError, FitUndefinedError
from .evaluator import dft_plus

Z95 = 1.959963984540054
_BATCH_ENTRIES = 1 << 22
# above this many frequencies one FFT per sample beats direct sums
_DIRECT_MAX_K = 16


@dataclass(frozen=True)
class SmallBallEstimate:
    n: int
    k: int
    t: float
    trials: int
    hits: int
    p_hat: float
    ci_halfwidth: float
    gcd_nk: int
    bound_value: float = math.nan

    @property
    def upper(self):
        """p_hat + ci_halfwidth; for zero hits this is the rule-of-three bound."""
        return self.p_hat + self.ci_halfwidth


def ci_halfwidth(hits, trials):
    """95% normal-approximation half width; 3/trials when nothing was hit."""
    if hits == 0:
        return 3.0 / trials
    p = hits / trials
    return Z95 * math.sqrt(p * (1.0 - p) / trials)


def _abs_S_block(law, n, ks, seed, start, stop):
    ks = np.asarray(ks, dtype=np.int64)
    direct = ks.size <= _DIRECT_MAX_K
    if direct:
        j = np.arange(n, dtype=np.int64)
        c, s = cos_sin_turns(((j[:, None] * ks[None, :]) % n) / n)
        basis = np.concatenate([c, s], axis=1)
    out = np.empty((stop - start, ks.size))
    batch = max(1, _BATCH_ENTRIES // n)
    for b0 in range(start, stop, batch):
        b1 = min(stop, b0 + batch)
        X = np.stack([law.draw(seed, i, n) for i in range(b0, b1)])
        if direct:
            proj = X @ basis
            vals = np.hypot(proj[:, :ks.size], proj[:, ks.size:])
        else:
            vals = np.abs(dft_plus(X, axis=1))[:, ks]
        out[b0 - start:b1 - start] = vals
    return out


def sample_abs_S(law, n, ks, trials, seed=0, workers=1):
    """|S_{n,k}| for each trial (rows) and each k (columns)."""
    ks = [int(k) for k in ks]
    for k in ks:
        if not 0 <= k < n:
            raise IndexError(f"k={k} outside 0..{n - 1}")
    if workers <= 1 or trials < 2 * workers:
        return _abs_S_block(law, n, ks, seed, 0, trials)
    edges = np.linspace(0, trials, workers + 1).astype(int)
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_abs_S_block, *zip(*[
            (law, n, ks, seed, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])])))
    return np.concatenate(parts)


def small_ball_table(law, n, ks, ts, trials, seed=0, workers=1) -> list[SmallBallEstimate]:
    """Estimates for every (k, t) pair, all computed on one set of samples."""
    if trials < 1:
        raise ValueError("trials must be positive")
    absS = sample_abs_S(law, n, ks, trials, seed, workers)
    rows = []
    for col, k in enumerate(ks):
        for t in ts:
            hits = int(np.count_nonzero(absS[:, col] <= t))
            rows.append(SmallBallEstimate(
                n=int(n), k=int(k), t=float(t), trials=int(trials), hits=hits,
                p_hat=hits / trials, ci_halfwidth=ci_halfwidth(hits, trials),
                gcd_nk=math.gcd(n, k)))
    return rows


def mc_small_ball(law, n, k, t, trials=10**5, seed=0, workers=1) -> SmallBallEstimate:
    if trials < 10**4:
        raise ValueError("need at least 10**4 trials")
    if not 0 <= k <= n - 1:
        raise IndexError(f"k={k} outside 0..{n - 1}")
    return small_ball_table(law, n, [k], [t], trials, seed, workers)[0]


def gcd_threshold(n):
    """n**(2/3) * log(n), the gcd cut-off of the small-ball lemma."""
    return n ** (2.0 / 3.0) * math.log(n)


def rv_admissible(n, k):
    return 1 <= k <= n - 1 and 2 * k != n and math.gcd(n, k) <= gcd_threshold(n)


def rv_bound(n, k, t, C1, C2):
    """(C1/n) * (t/sqrt(2) + C2*gcd(n,k)/n)**2."""
    if not rv_admissible(n, k):
        raise DomainError(f"k={k} is outside the lemma's range for n={n}; use remark_bound")
    if not (C1 > 0 and C2 > 0):
        raise ValueError("C1 and C2 must be positive")
    return C1 / n * (t / math.sqrt(2.0) + C2 * math.gcd(n, k) / n) ** 2


def remark_bound(n, k, t, C1=1.0, C=1.0):
    """C/sqrt(n) for k in {0, n/2}; (C1/n)(t/sqrt(2) + 2*sqrt(2))**2 otherwise."""
    if not 0 <= k <= n - 1:
        raise IndexError(f"k={k} outside 0..{n - 1}")
    if k == 0 or 2 * k == n:
        return C / math.sqrt(n)
    return C1 / n * (t / math.sqrt(2.0) + 2.0 * math.sqrt(2.0)) ** 2


class Census(NamedTuple):
    count: int
    offenders: list


def gcd_census(n, threshold) -> Census:
    """All k in 1..n-1 with gcd(k, n) > threshold, by direct enumeration."""
    if n < 2 or not threshold > 0:
        raise ValueError("need n >= 2 and threshold > 0")
    k = np.arange(1, n)
    offenders = k[np.gcd(k, n) > threshold].tolist()
    return Census(len(offenders), offenders)


def _phi(m):
    return sum(1 for i in range(1, m + 1) if math.gcd(i, m) == 1)


def gcd_census_count(n, threshold):
    """Same count as ``gcd_census`` without the O(n) scan.

    gcd(k, n) = n/e exactly for phi(e) values of k in 1..n-1, so only the
    small cofactors e < n/threshold contribute.
    """
    if n < 2 or not threshold > 0:
        raise ValueError("need n >= 2 and threshold > 0")
    total = 0
    e = 2
    while e * threshold < n:
        if n % e == 0 and n // e > threshold:
            total += _phi(e)
        e += 1
    return total


class ScalingFit(NamedTuple):
    slope: float
    intercept: float
    r2: float
    points: int


def fit_log_log(x, y) -> ScalingFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0)
    if np.count_nonzero(keep) < 2 or np.unique(x[keep]).size < 2:
        raise FitUndefinedError("need at least two distinct positive points")
    res = scipy.stats.linregress(np.log(x[keep]), np.log(y[keep]))
    r2 = res.rvalue ** 2 if np.isfinite(res.rvalue) else 1.0
    return ScalingFit(float(res.slope), float(res.intercept), float(r2), int(np.count_nonzero(keep)))


def fit_scaling(estimates: Sequence[SmallBallEstimate], min_distinct_n=4) -> ScalingFit:
    """Least squares of log p_hat against log n; zero-hit cells are dropped."""
    if len({e.n for e in estimates}) < min_distinct_n:
        raise ValueError(f"need at least {min_distinct_n} distinct n values")
    used = [e for e in estimates if e.hits > 0]
    if not used:
        raise FitUndefinedError("every cell has zero hits")
    return fit_log_log([e.n for e in used], [e.p_hat for e in used])


def ks_per_gcd_class(n, per_class=2, seed=0):
    """Up to ``per_class`` admissible k for each gcd value g = gcd(n, k).

    The smallest k of the class (k = g) is always taken; the rest are drawn
    without replacement from the class, deterministically in ``seed``.
    """
    rng = np.random.default_rng([int(seed), int(n)])
    out = []
    k_all = np.arange(1, n)
    gcds = np.gcd(k_all, n)
    for g in sorted(set(gcds.tolist())):
        members = [int(k) for k in k_all[gcds == g] if rv_admissible(n, int(k))]
        if not members:
            continue
        chosen = [members[0]]
        rest = members[1:]
        if rest and per_class > 1:
            take = min(per_class - 1, len(rest))
            chosen += sorted(int(x) for x in rng.choice(rest, size=take, replace=False))
        out.extend(chosen)
    return sorted(out)


class Constants(NamedTuple):
    C1: float
    C2: float


def calibrate_constants(estimates: Sequence[SmallBallEstimate], C2_grid=None) -> Constants:
    """Smallest C1 (for each C2 on a grid) making the bound cover every cell.

    Among those pairs the one with the smallest total log-excess
    sum log(bound / p_hat) over cells with hits is returned, i.e. the tightest
    envelope that still dominates the whole calibration grid.
    """
    cells = [e for e in estimates if rv_admissible(e.n, e.k)]
    if not cells:
        raise ValueError("no admissible calibration cells")
    if C2_grid is None:
        C2_grid = np.logspace(-2, 3, 201)
    n = np.array([e.n for e in cells], dtype=float)
    g = np.array([e.gcd_nk for e in cells], dtype=float)
    t = np.array([e.t for e in cells])
    p = np.array([e.p_hat for e in cells])
    hit = p > 0
    best = None
    for C2 in C2_grid:
        shape = (t / math.sqrt(2.0) + C2 * g / n) ** 2 / n
        C1 = float(np.max(p / shape))
        if C1 <= 0:
            continue
        excess = float(np.sum(np.log(C1 * shape[hit] / p[hit])))
        if best is None or excess < best[0]:
            best = (excess, C1, float(C2))
    if best is None:
        raise FitUndefinedError("calibration grid has zero hits everywhere")
    return Constants(best[1], best[2])


def with_bounds(estimates, constants: Constants, C=1.0):
    """Attach the lemma bound (or the remark bound off its domain) to each estimate."""
    out = []
    for e in estimates:
        if rv_admissible(e.n, e.k):
            b = rv_bound(e.n, e.k, e.t, constants.C1, constants.C2)
        else:
            b = remark_bound(e.n, e.k, e.t, constants.C1, C)
        out.append(replace(e, bound_value=b))
    return out


def dominated(e: SmallBallEstimate, slack=3.0):
    return e.p_hat <= e.bound_value + slack * e.ci_halfwidth
