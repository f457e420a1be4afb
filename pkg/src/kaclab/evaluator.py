"""Evaluation of G_n(z) = sum_j xi_j z**j on the region grid.

A rotated layer ``exp(i*(2*pi*k/n + phi))``, k = 0..n-1, is one unnormalized
DFT with the ``+`` sign convention of the twisted vector ``xi_j exp(i*j*phi)``.
``scipy.fft`` handles every length (prime lengths go through Bluestein).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from ._trig import unit_turns
from .coefficients import PolynomialSample
from .errors import InvalidSizeError
from .region import GridPoint, RegionSpec

# cap on the cached (layers x n) twiddle table, in complex entries
_TWIDDLE_CACHE_ENTRIES = 1 << 22
_CHUNK_ENTRIES = 1 << 20


def _coeffs(sample):
    if isinstance(sample, PolynomialSample):
        return np.asarray(sample.coefficients, dtype=float)
    return np.asarray(sample, dtype=float)


def horner_eval(sample, z):
    """G_n(z) by the Horner recurrence, highest coefficient first."""
    c = _coeffs(sample)
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for coef in c[::-1]:
        acc = acc * z + coef
    return acc[()] if acc.ndim == 0 else acc


def dft_plus(x, axis=-1):
    """sum_j x_j exp(+2*pi*i*j*k/n), no normalization."""
    return scipy.fft.ifft(x, axis=axis, norm="forward")


@dataclass(frozen=True)
class EvalResult:
    phi: float
    values: np.ndarray
    moduli: np.ndarray
    min_modulus: float
    argmin: int
    max_modulus: float


def eval_layer(sample, phi=0.0) -> EvalResult:
    """G_n at exp(i*(2*pi*k/n + phi)) for k = 0..n-1 in O(n log n)."""
    c = _coeffs(sample)
    n = c.size
    if n < 2:
        raise InvalidSizeError("need n >= 2")
    j = np.arange(n)
    twisted = c * np.exp(1j * phi * j) if phi else c.astype(complex)
    values = dft_plus(twisted)
    moduli = np.abs(values)
    i = int(np.argmin(moduli))
    return EvalResult(float(phi), values, moduli, float(moduli[i]), i, float(moduli.max()))


def compute_S(sample, k: int) -> complex:
    """S_{n,k} = sum_j xi_j exp(2*pi*i*k*j/n)."""
    c = _coeffs(sample)
    n = c.size
    if not 0 <= k < n:
        raise IndexError(f"k={k} outside 0..{n - 1}")
    j = np.arange(n)
    w = unit_turns(((j * k) % n) / n)
    return complex(np.dot(c, w))


def tail_functional(sample, delta: float) -> float:
    """sum_j |xi_j| (1 + delta)**j, which dominates max_{|z| <= 1+delta} |G_n(z)|."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    c = np.abs(_coeffs(sample))
    return math.fsum(c * (1.0 + delta) ** np.arange(c.size))


class RegionEvaluator:
    """Center values of G_n over a whole region, reusing one twiddle table.

    Layer l uses phase angles ``j * l * alpha``; the product ``j * l`` is
    reduced mod N in integers before scaling so large layers lose no accuracy.
    """

    def __init__(self, spec: RegionSpec):
        self.spec = spec
        n, m = spec.n, spec.m
        self._layers = m + 1
        self._cached = None
        if self._layers * n <= _TWIDDLE_CACHE_ENTRIES:
            self._cached = self._twiddles(0, self._layers)
        self._chunk = max(1, _CHUNK_ENTRIES // n)

    def _twiddles(self, l0, l1):
        n, N = self.spec.n, self.spec.N
        j = np.arange(n, dtype=np.int64)
        l = np.arange(l0, l1, dtype=np.int64)
        return np.exp(1j * self.spec.alpha * ((l[:, None] * j[None, :]) % N))

    def layer_moduli(self, coefficients, l0=0, l1=None):
        """|G_n| on layers l0..l1-1 as an array of shape (l1 - l0, n)."""
        c = np.asarray(coefficients, dtype=float)
        l1 = self._layers if l1 is None else l1
        tw = self._cached[l0:l1] if self._cached is not None else self._twiddles(l0, l1)
        return np.abs(dft_plus(tw * c[None, :], axis=1))

    def min_max(self, coefficients):
        """(min, max, k, l) over all centers; k=0 is a center only on layer 0."""
        n = self.spec.n
        c = np.asarray(coefficients, dtype=float)
        if c.size != n:
            raise InvalidSizeError(f"sample has n={c.size}, region has n={n}")
        lo, hi, arg = math.inf, -math.inf, (0, 0)
        for l0 in range(0, self._layers, self._chunk):
            l1 = min(self._layers, l0 + self._chunk)
            mod = self.layer_moduli(c, l0, l1)
            skip = 1 if l0 == 0 else 0
            # rotated layers carry k = 1..n-1 only
            hi = max(hi, float(mod[skip:, 1:].max(initial=-math.inf)))
            if l0 == 0:
                hi = max(hi, float(mod[0].max()))
                i = int(np.argmin(mod[0]))
                if mod[0, i] < lo:
                    lo, arg = float(mod[0, i]), (i, 0)
            rest = mod[skip:, 1:]
            if rest.size:
                flat = int(np.argmin(rest))
                if rest.flat[flat] < lo:
                    r, col = divmod(flat, n - 1)
                    lo, arg = float(rest.flat[flat]), (col + 1, l0 + skip + r)
        return lo, hi, arg[0], arg[1]


def region_min_max(sample, spec: RegionSpec):
    """Global (min_modulus, max_modulus, argmin GridPoint) over all ball centers."""
    c = _coeffs(sample)
    if c.size != spec.n:
        raise InvalidSizeError(f"sample has n={c.size}, region has n={spec.n}")
    lo, hi, k, l = RegionEvaluator(spec).min_max(c)
    angle = 2 * math.pi * k / spec.n + l * spec.alpha
    return lo, hi, GridPoint(k, l, angle, complex(np.exp(1j * angle)))


def layer_table(sample, spec: RegionSpec):
    """Per-layer rows (l, phi, min, argmin_k, max) over that layer's centers."""
    ev = RegionEvaluator(spec)
    c = _coeffs(sample)
    rows = []
    for l0 in range(0, spec.m + 1, ev._chunk):
        l1 = min(spec.m + 1, l0 + ev._chunk)
        mod = ev.layer_moduli(c, l0, l1)
        for r in range(mod.shape[0]):
            l = l0 + r
            row = mod[r] if l == 0 else mod[r, 1:]
            offset = 0 if l == 0 else 1
            i = int(np.argmin(row))
            rows.append((l, l * spec.alpha, float(row[i]), i + offset, float(row.max())))
    return rows
