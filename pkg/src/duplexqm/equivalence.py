"""Complex <-> duplex potential transforms and the equivalence check.

A complex solution exp(R + iS) with potential U and a duplex solution
exp(R + IS) with potential W share (R, S) when

    W = U + 2 S_t + S_x^2          (dynamic route)
    W = -U + R_xx + R_x^2          (amplitude route)

The two routes differ by exactly -2 times the first complex polar equation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra2d import Kind
from .errors import OutOfCone
from .evolution import PolarTerms, potential_values, resolve_polar
from .field import Grid1D, ScalarField1D

SCHEMA_VERSION = 1
DEFAULT_TOLERANCE = 1e-4

CHANNELS = ("complex_eq1", "complex_eq2", "duplex_eq1", "duplex_eq2")


def transform_w_from_dynamics(U, pair_traj) -> ScalarField1D:
    t = PolarTerms.from_trajectory(pair_traj)
    return ScalarField1D(t.grid, potential_values(U, t.grid) + 2 * t.S_t + t.S_x ** 2)


def transform_w_from_amplitude(U, pair_traj) -> ScalarField1D:
    t = PolarTerms.from_trajectory(pair_traj)
    return ScalarField1D(t.grid, -potential_values(U, t.grid) + t.R_xx + t.R_x ** 2)


def stationary_identification(U, E: float, grid: Grid1D) -> ScalarField1D:
    """W = U - 2E, turning 1/2 Lap u = (E + W) u into 1/2 Lap u = (U - E) u."""
    return ScalarField1D(grid, potential_values(U, grid) - 2 * E)


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    tolerance: float
    channel: Optional[str] = None
    magnitude: Optional[float] = None

    def to_dict(self):
        if self.equivalent:
            return {"kind": "Equivalent", "tolerance": self.tolerance}
        return {"kind": "NotEquivalent", "channel": self.channel,
                "magnitude": self.magnitude, "tolerance": self.tolerance}


@dataclass(frozen=True, eq=False)
class EquivalenceReport:
    w_field: ScalarField1D
    residual_complex: tuple[ScalarField1D, ScalarField1D]
    residual_duplex: tuple[ScalarField1D, ScalarField1D]
    max_abs: dict
    verdict: Verdict
    mask: np.ndarray = field(repr=False, default=None)
    excluded_measure: float = 0.0

    @property
    def equivalent(self):
        return self.verdict.equivalent

    def to_dict(self):
        g = self.w_field.grid
        m = self.mask

        def arr(f):
            return [float(v) if ok else None for v, ok in zip(f.values, m)]

        return {
            "schema_version": SCHEMA_VERSION,
            "grid": {"x_min": g.x_min, "x_max": g.x_max, "n_points": g.n_points,
                     "boundary": g.boundary.value},
            "w_field": arr(self.w_field),
            "residual_complex": {"eq1": arr(self.residual_complex[0])},
            "residual_duplex": {"eq1": arr(self.residual_duplex[0])},
            "continuity": arr(self.residual_complex[1]),
            "max_abs": {k: float(v) for k, v in self.max_abs.items()},
            "verdict": self.verdict.to_dict(),
            "excluded_measure": self.excluded_measure,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def node_mask(values, grid: Grid1D, radius: float, rel_tol: float = 1e-12) -> np.ndarray:
    """True where a point is farther than ``radius`` from every zero of ``values``.

    Zeros are grid points with |values| <= rel_tol * max|values| and sign
    changes between neighbours (located by linear interpolation).
    """
    v = np.asarray(values, dtype=float)
    x = grid.x
    zero = np.abs(v) <= rel_tol * np.max(np.abs(v))
    nodes = list(x[zero])
    s = np.sign(v)
    for i in np.flatnonzero((s[:-1] * s[1:]) < 0):
        nodes.append(x[i] - v[i] * (x[i + 1] - x[i]) / (v[i + 1] - v[i]))
    keep = np.ones(len(x), dtype=bool)
    for xn in nodes:
        keep &= np.abs(x - xn) > radius
    return keep


def verify_equivalence(U, pair_traj, tolerance: float = DEFAULT_TOLERANCE, mask=None,
                       scale_by_magnitude: bool = False) -> EquivalenceReport:
    """Evaluate both polar systems on one (R, S) with W from the dynamic route.

    ``mask`` selects the grid points that count (e.g. away from nodes).  With
    ``scale_by_magnitude`` the tolerance is multiplied by max(1, max|U|, max|W|)
    over the mask.
    """
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        return _verify(U, pair_traj, tolerance, mask, scale_by_magnitude)


def _verify(U, pair_traj, tolerance, mask, scale_by_magnitude):
    t = PolarTerms.from_trajectory(pair_traj)
    g = t.grid
    mask = np.ones(g.n_points, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    bad = np.flatnonzero(mask & ~(np.isfinite(t.R) & np.isfinite(t.S)))
    if bad.size:
        raise OutOfCone(f"polar form undefined at grid index {bad[0]} (x = {g.x[bad[0]]:g})", int(bad[0]))
    W = transform_w_from_dynamics(U, pair_traj)
    c1, c2 = resolve_polar(Kind.ELLIPTIC, t, U)
    d1, d2 = resolve_polar(Kind.HYPERBOLIC, t, W)
    chans = dict(zip(CHANNELS, (c1, c2, d1, d2)))
    max_abs = {k: float(np.max(np.abs(f.values[mask]))) if mask.any() else 0.0
               for k, f in chans.items()}
    tol = tolerance
    if scale_by_magnitude:
        u = potential_values(U, g)[mask]
        tol *= max(1.0, float(np.max(np.abs(u), initial=0)), float(np.max(np.abs(W.values[mask]), initial=0)))
    bad = [k for k, v in max_abs.items() if not np.isfinite(v)]
    worst = bad[0] if bad else max(max_abs, key=max_abs.get)
    if not bad and max_abs[worst] <= tol:
        verdict = Verdict(True, tol)
    else:
        verdict = Verdict(False, tol, worst, max_abs[worst])
    excluded = float(np.count_nonzero(~mask) * g.h)
    return EquivalenceReport(W, (c1, c2), (d1, d2), max_abs, verdict, mask, excluded)
