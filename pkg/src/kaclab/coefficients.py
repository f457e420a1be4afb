"""I.i.d. coefficient laws, samplers and numerical checks of their hypotheses.

Laws are written as short text tokens::

    rademacher
    uniform:M=1.0
    gaussian:sigma=1.0
    pareto:p=0.9,scale=1.0

``pareto`` is the symmetric Pareto law with density proportional to
``|x|**(-1 - p)`` for ``|x| >= scale``; its r-th absolute moment is finite
iff ``r < p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import _rng
from .errors import InvalidLawError, InvalidSizeError

KINDS = ("rademacher", "uniform", "gaussian", "pareto")

# token keyword -> dataclass field
_TOKEN_KEYS = {
    "uniform": {"M": "M"},
    "gaussian": {"sigma": "sigma"},
    "pareto": {"p": "p_tail", "scale": "scale"},
}


@dataclass(frozen=True)
class CoefficientLaw:
    kind: str
    M: Optional[float] = None
    sigma: Optional[float] = None
    p_tail: Optional[float] = None
    scale: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidLawError(f"unknown law kind {self.kind!r}")
        required = {
            "rademacher": (),
            "uniform": ("M",),
            "gaussian": ("sigma",),
            "pareto": ("p_tail", "scale"),
        }[self.kind]
        for name in ("M", "sigma", "p_tail", "scale"):
            value = getattr(self, name)
            if name in required:
                if value is None or not math.isfinite(value) or value <= 0:
                    raise InvalidLawError(
                        f"{self.kind} law needs {name} > 0, got {value!r}")
            elif value is not None:
                raise InvalidLawError(f"{self.kind} law takes no {name}")

    @classmethod
    def rademacher(cls):
        return cls("rademacher")

    @classmethod
    def uniform(cls, M=1.0):
        return cls("uniform", M=float(M))

    @classmethod
    def gaussian(cls, sigma=1.0):
        return cls("gaussian", sigma=float(sigma))

    @classmethod
    def pareto(cls, p_tail, scale=1.0):
        return cls("pareto", p_tail=float(p_tail), scale=float(scale))

    @classmethod
    def parse(cls, token: str) -> "CoefficientLaw":
        """Parse a law token such as ``pareto:p=0.9,scale=1``."""
        kind, _, rest = token.strip().partition(":")
        kind = kind.strip().lower()
        if kind not in KINDS:
            raise InvalidLawError(f"unknown law kind in token {token!r}")
        kwargs = {}
        if rest.strip():
            keys = _TOKEN_KEYS.get(kind, {})
            for item in rest.split(","):
                key, eq, value = item.partition("=")
                key = key.strip()
                if not eq or key not in keys:
                    raise InvalidLawError(f"bad parameter {item!r} in {token!r}")
                try:
                    kwargs[keys[key]] = float(value)
                except ValueError:
                    raise InvalidLawError(f"bad number {value!r} in {token!r}") from None
        if kind == "pareto":
            kwargs.setdefault("scale", 1.0)
        return cls(kind, **kwargs)

    @property
    def token(self) -> str:
        if self.kind == "rademacher":
            return "rademacher"
        if self.kind == "uniform":
            return f"uniform:M={self.M!r}"
        if self.kind == "gaussian":
            return f"gaussian:sigma={self.sigma!r}"
        return f"pareto:p={self.p_tail!r},scale={self.scale!r}"

    def __str__(self):
        return self.token

    def draw(self, seed, trial, n):
        """Draw ``n`` values from the (seed, trial) stream."""
        if self.kind == "rademacher":
            return _rng.random_signs(seed, trial, n)
        rng = _rng.generator(seed, trial)
        if self.kind == "uniform":
            return rng.uniform(-self.M, self.M, n)
        if self.kind == "gaussian":
            return self.sigma * rng.standard_normal(n)
        # inverse CDF of |xi| on (0, 1], then an independent sign
        u = 1.0 - rng.random(n)
        signs = 2.0 * rng.integers(0, 2, n) - 1.0
        return signs * self.scale * u ** (-1.0 / self.p_tail)


@dataclass(frozen=True)
class PolynomialSample:
    """One realization of the coefficients xi_0, ..., xi_{n-1}."""

    coefficients: np.ndarray
    law: Optional[CoefficientLaw] = None
    seed: Optional[int] = None
    trial_index: Optional[int] = None

    @property
    def n(self):
        return len(self.coefficients)

    @classmethod
    def from_coefficients(cls, coefficients):
        c = np.asarray(coefficients, dtype=float)
        if c.ndim != 1 or c.size < 2:
            raise InvalidSizeError("need a vector of at least 2 coefficients")
        return cls(c)


def sample_coefficients(law: CoefficientLaw, n: int, seed: int, trial: int = 0) -> PolynomialSample:
    """Sample n i.i.d. coefficients; bit-identical for identical arguments."""
    if not isinstance(law, CoefficientLaw):
        raise InvalidLawError(f"expected a CoefficientLaw, got {law!r}")
    if n < 2:
        raise InvalidSizeError(f"need n >= 2 coefficients, got {n}")
    coeffs = law.draw(seed, trial, n)
    coeffs.setflags(write=False)
    return PolynomialSample(coeffs, law, int(seed), int(trial))


@dataclass(frozen=True)
class AntiConcentrationCert:
    a: float
    q_hat: float
    M_hat: float
    trials: int
    u_grid_step: float
    u_range: float
    sup_concentration: float
    u_star: float
    mc_halfwidth: float


class MomentEstimate(NamedTuple):
    mean: float
    stderr: float
    r: float
    trials: int


def _dkw_halfwidth(trials, level=0.05):
    return 2.0 * math.sqrt(math.log(2.0 / level) / (2.0 * trials))


def concentration_function(values, a, u_grid):
    """Empirical P(|xi - u| <= a) for every u of ``u_grid``."""
    x = np.sort(np.asarray(values, dtype=float))
    u = np.asarray(u_grid, dtype=float)
    lo = np.searchsorted(x, u - a, side="left")
    hi = np.searchsorted(x, u + a, side="right")
    return (hi - lo) / x.size


def estimate_anticoncentration(law, a=0.5, trials=10**5, u_range=None, u_step=None, seed=0):
    """Estimate q(a) = 1 - sup_u P(|xi - u| <= a) and a matching tail level M.

    The sup over u is taken on the grid ``{k * u_step : |k * u_step| <= u_range}``.
    By default ``u_step = a / 4`` and ``u_range`` is the 0.999 quantile of
    ``|xi|`` plus ``a``.  ``M_hat`` is the first M of the doubling sequence
    ``a, 2a, 4a, ...`` with empirical ``P(|xi| > M) <= q_hat / 2``.
    """
    if trials < 10**4:
        raise ValueError("need at least 10**4 trials")
    if not a > 0:
        raise ValueError("width a must be positive")
    if u_step is None:
        u_step = a / 4.0
    if not 0 < u_step <= a:
        raise ValueError("u_step must lie in (0, a]")

    xs = law.draw(seed, 0, trials)
    abs_xs = np.abs(xs)
    if u_range is None:
        u_range = float(np.quantile(abs_xs, 0.999)) + a
    kmax = int(math.floor(u_range / u_step))
    u_grid = u_step * np.arange(-kmax, kmax + 1)
    conc = concentration_function(xs, a, u_grid)
    best = int(np.argmax(conc))
    sup_conc = float(conc[best])
    q_hat = 1.0 - sup_conc

    top = float(abs_xs.max())
    M = a
    while np.count_nonzero(abs_xs > M) / trials > q_hat / 2.0 and M < top:
        M *= 2.0
    return AntiConcentrationCert(
        a=float(a), q_hat=q_hat, M_hat=M, trials=int(trials),
        u_grid_step=float(u_step), u_range=float(u_range),
        sup_concentration=sup_conc, u_star=float(u_grid[best]),
        mc_halfwidth=_dkw_halfwidth(trials),
    )


def empirical_moment(law, r, trials=10**5, seed=0) -> MomentEstimate:
    """Sample mean of |xi|**r with its standard error."""
    if not r > 0:
        raise ValueError("moment order r must be positive")
    if trials < 10**4:
        raise ValueError("need at least 10**4 trials")
    vals = np.abs(law.draw(seed, 0, trials)) ** r
    return MomentEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(trials)),
                          float(r), int(trials))
