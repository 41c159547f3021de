"""Two-beam intensities near the centre of a two-slit screen.

The intensity is the algebraic norm of e^(a phi) + e^(a (phi + delta)),
evaluated in the complex algebra (fringes, 4 cos^2(delta/2)) or in the
duplex algebra (no fringes, 4 cosh^2(delta/2)).  Note the duplex value
has its minimum at the centre and grows without bound in |delta|.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import algebra2d as a2
from .algebra2d import Kind

_SIGS = {Kind.ELLIPTIC: a2.COMPLEX, Kind.HYPERBOLIC: a2.DUPLEX}


@dataclass(frozen=True)
class SlitGeometry:
    d: float
    L: float
    x_range: tuple[float, float]

    def __post_init__(self):
        if self.d <= 0 or self.L <= 0:
            raise ValueError("slit separation and screen distance must be positive")
        lo, hi = self.x_range
        if hi < lo:
            raise ValueError("x_range must be ordered")
        if self.d / self.L > 0.1:
            warnings.warn(f"d/L = {self.d / self.L:g}; the small-angle phase estimate needs d << L")

    @classmethod
    def for_delta_range(cls, delta_max: float, d: float = 1e-3, L: float = 1.0):
        """Symmetric screen window with |delta| <= delta_max."""
        x_max = delta_max * L / d
        return cls(d, L, (-x_max, x_max))


def phase_difference(x, geom: SlitGeometry):
    return x * geom.d / geom.L


def two_beam_intensity(kind: Kind, delta: float, base_phase: float = 0.0) -> float:
    """|e^(a phi) + e^(a (phi + delta))|^2 from the algebra, no closed form involved."""
    return float(two_beam_intensity_array(kind, delta, base_phase))


def two_beam_intensity_array(kind: Kind, delta, base_phase=0.0) -> np.ndarray:
    """Vectorized `two_beam_intensity`.

    The duplex sum is formed in the idempotent basis, where addition and
    the norm stay free of the cancellation that c0^2 - c1^2 suffers at
    large hyperbolic angles.
    """
    kind = Kind(kind)
    delta = np.asarray(delta, dtype=float)
    if kind is Kind.HYPERBOLIC:
        z = a2.IsotropicPair.exp_polar(0.0, base_phase) + a2.IsotropicPair.exp_polar(0.0, base_phase + delta)
        return np.asarray(z.norm_sq())
    sig = _SIGS[kind]
    z = a2.exp_polar_coeffs(sig, 0.0, base_phase) + a2.exp_polar_coeffs(sig, 0.0, base_phase + delta)
    return a2.norm_sq_coeffs(sig, z)


@dataclass(frozen=True)
class Pattern:
    kind: Kind
    x: np.ndarray
    delta: np.ndarray
    intensity: np.ndarray

    def columns(self):
        return {"x": self.x, "delta": self.delta, "intensity": self.intensity}


def pattern_scan(kind: Kind, geom: SlitGeometry, n_samples: int) -> Pattern:
    """Uniform scan of the screen window.  A zero-width window yields one sample."""
    lo, hi = geom.x_range
    if lo == hi:
        x = np.array([lo], dtype=float)
    else:
        if n_samples < 16:
            raise ValueError("n_samples must be at least 16")
        x = np.linspace(lo, hi, n_samples)
    delta = phase_difference(x, geom)
    return Pattern(Kind(kind), x, delta, two_beam_intensity_array(kind, delta))


@dataclass(frozen=True)
class FringeCensus:
    minima_left: int
    minima_right: int
    strict_zero_count: int
    monotone_from_center: bool
    minima_delta: tuple

    @property
    def minima_count(self):
        return self.minima_left + self.minima_right

    def to_dict(self):
        return {"minima_count": self.minima_count, "minima_left": self.minima_left,
                "minima_right": self.minima_right, "strict_zero_count": self.strict_zero_count,
                "monotone_from_center": self.monotone_from_center,
                "minima_delta": list(self.minima_delta)}


def fringe_census(pattern: Pattern, zero_tol: float = 1e-3) -> FringeCensus:
    """Count interior local minima on each side of the central sample.

    The central sample itself (closest to x = 0) is not counted, so a
    single bump or dip at the centre gives zero minima.  A minimum counts
    as a strict zero when its intensity is at most ``zero_tol`` times the
    pattern maximum.  ``monotone_from_center`` means the intensity never
    decreases when walking outwards from the centre on either side.
    """
    I = pattern.intensity
    n = len(I)
    c = int(np.argmin(np.abs(pattern.x)))
    left = right = zeros = 0
    where = []
    peak = float(np.max(I)) if n else 0.0
    for k in range(1, n - 1):
        if k == c:
            continue
        if I[k] <= I[k - 1] and I[k] <= I[k + 1] and (I[k] < I[k - 1] or I[k] < I[k + 1]):
            if k < c:
                left += 1
            else:
                right += 1
            where.append(float(pattern.delta[k]))
            if I[k] <= zero_tol * peak:
                zeros += 1
    monotone = bool(np.all(np.diff(I[c:]) >= 0) and np.all(np.diff(I[:c + 1]) <= 0))
    return FringeCensus(left, right, zeros, monotone, tuple(where))
