"""Uniform 1D grids, real and algebra-valued fields, finite differences.

Dirichlet grids include both endpoints, h = (x_max - x_min)/(n - 1), and use
one-sided second-order stencils at the ends.  Periodic grids identify
x_max with x_min and therefore drop the endpoint: h = (x_max - x_min)/n.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np
import scipy.sparse as sp

from . import algebra2d as a2
from .algebra2d import AlgebraSignature2D
from .clifford import CliffordSignature
from .errors import OutOfCone, SignatureMismatch


class Boundary(str, Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.n_points < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @classmethod
    def with_spacing(cls, x_min, x_max, h, boundary=Boundary.DIRICHLET):
        intervals = int(round((x_max - x_min) / h))
        n = intervals if Boundary(boundary) is Boundary.PERIODIC else intervals + 1
        return cls(x_min, x_max, n, boundary)

    @property
    def periodic(self):
        return self.boundary is Boundary.PERIODIC

    @property
    def h(self):
        if self.periodic:
            return (self.x_max - self.x_min) / self.n_points
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self):
        return self.x_min + self.h * np.arange(self.n_points)


@dataclass(frozen=True, eq=False)
class ScalarField1D:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise ValueError(f"field has shape {v.shape}, grid has {self.grid.n_points} points")
        object.__setattr__(self, "values", v)

    @property
    def x(self):
        return self.grid.x


@dataclass(frozen=True, eq=False)
class AlgebraField1D:
    """Field with values in a 2D algebra or a Clifford algebra.

    ``coeffs`` has shape (n_points, dim): (c0, c1) for 2D algebras, the
    2^n blade coefficients for Clifford algebras.
    """

    grid: Grid1D
    sig: Any
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        dim = self.sig.dim if isinstance(self.sig, CliffordSignature) else 2
        if c.shape != (self.grid.n_points, dim):
            raise ValueError(f"coefficients have shape {c.shape}, expected {(self.grid.n_points, dim)}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_complex(cls, grid, z):
        z = np.asarray(z, dtype=complex)
        return cls(grid, a2.COMPLEX, np.stack([z.real, z.imag], axis=-1))

    @classmethod
    def from_polar(cls, grid, sig, R, S):
        return cls(grid, sig, a2.exp_polar_coeffs(sig, R, S))

    def to_complex(self):
        if self.sig != a2.COMPLEX:
            raise SignatureMismatch("not a complex field")
        return self.coeffs[:, 0] + 1j * self.coeffs[:, 1]

    @property
    def x(self):
        return self.grid.x


@dataclass(frozen=True)
class PolarPair:
    """(R, S) of the polar form Psi = exp(R + a S)."""

    R: ScalarField1D
    S: ScalarField1D

    def wrapped_phase(self):
        """S folded onto (-pi, pi]; the circle-valued phase of the complex case."""
        return wrap_phase(self.S.values)


def wrap_phase(s):
    w = np.mod(np.asarray(s) + np.pi, 2 * np.pi) - np.pi
    return np.where(w == -np.pi, np.pi, w)


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped frames; time derivatives are taken at the middle frame."""

    times: Sequence[float]
    frames: Sequence[Any]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if len(t) != len(self.frames):
            raise ValueError("times and frames differ in length")
        if len(t) < 3:
            raise ValueError("a trajectory needs at least 3 frames")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "frames", tuple(self.frames))

    @property
    def mid(self) -> int:
        return len(self.frames) // 2

    @property
    def middle(self):
        return self.frames[self.mid]

    @property
    def t(self) -> float:
        return float(self.times[self.mid])

    def time_derivative(self, get: Callable[[Any], np.ndarray]) -> np.ndarray:
        """Three-point centered derivative of ``get(frame)`` at the middle frame."""
        m = self.mid
        t0, t1, t2 = self.times[m - 1:m + 2]
        h1, h2 = t1 - t0, t2 - t1
        f0, f1, f2 = (np.asarray(get(self.frames[k])) for k in (m - 1, m, m + 1))
        if h1 == h2:
            return (f2 - f0) / (2 * h1)
        return (-h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1
                + h1 / (h2 * (h1 + h2)) * f2)


# -- finite differences ------------------------------------------------------

def _values(f):
    return f.values if isinstance(f, ScalarField1D) else np.asarray(f)


def gradient_array(grid: Grid1D, v) -> np.ndarray:
    """Second-order first derivative along axis 0."""
    v = np.asarray(v, dtype=float)
    h = grid.h
    if grid.periodic:
        return (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) / (2 * h)
    return np.gradient(v, h, axis=0, edge_order=2)


def laplacian_array(grid: Grid1D, v) -> np.ndarray:
    """Second-order second derivative along axis 0."""
    v = np.asarray(v, dtype=float)
    h2 = grid.h ** 2
    if grid.periodic:
        return (np.roll(v, -1, axis=0) - 2 * v + np.roll(v, 1, axis=0)) / h2
    if grid.n_points < 4:
        raise ValueError("one-sided second derivative needs at least 4 points")
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h2
    out[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h2
    out[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h2
    return out


def gradient(f: ScalarField1D) -> ScalarField1D:
    return ScalarField1D(f.grid, gradient_array(f.grid, f.values))


def laplacian(f: ScalarField1D) -> ScalarField1D:
    return ScalarField1D(f.grid, laplacian_array(f.grid, f.values))


def laplacian_matrix(grid: Grid1D) -> sp.csc_matrix:
    """Sparse second-difference matrix for solvers.

    Periodic grids wrap around; Dirichlet grids act on the interior
    unknowns with zero boundary values, giving an (n-2) x (n-2) matrix.
    """
    h2 = grid.h ** 2
    m = grid.n_points if grid.periodic else grid.n_points - 2
    main = np.full(m, -2.0 / h2)
    off = np.full(m - 1, 1.0 / h2)
    mat = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    if grid.periodic:
        mat[0, m - 1] = 1.0 / h2
        mat[m - 1, 0] = 1.0 / h2
    return mat.tocsc()


# -- polar decomposition of fields -------------------------------------------

def polar_arrays(sig: AlgebraSignature2D, coeffs, unwrap=True):
    c = np.asarray(coeffs, dtype=float)
    c0, c1 = c[..., 0], c[..., 1]
    if sig == a2.COMPLEX:
        r2 = c0 * c0 + c1 * c1
        bad = np.flatnonzero(r2 == 0)
        if bad.size:
            raise OutOfCone(f"complex field vanishes at grid index {bad[0]}", int(bad[0]))
        S = np.arctan2(c1, c0)
        S = np.where(S == -np.pi, np.pi, S)
        if unwrap:
            S = np.unwrap(S, axis=-1)
        return 0.5 * np.log(r2), S
    if sig == a2.DUPLEX:
        lo, hi = c0 - c1, c0 + c1
        bad = np.flatnonzero((lo <= 0) | (hi <= 0))
        if bad.size:
            raise OutOfCone(f"duplex field leaves the positive cone at grid index {bad[0]}", int(bad[0]))
        return 0.5 * (np.log(lo) + np.log(hi)), 0.5 * (np.log(hi) - np.log(lo))
    raise SignatureMismatch(f"polar fields implemented for complex and duplex only, got {sig}")


def polar_fields(psi: AlgebraField1D) -> PolarPair:
    """Pointwise polar form; complex phases are unwrapped along the grid."""
    R, S = polar_arrays(psi.sig, psi.coeffs)
    return PolarPair(ScalarField1D(psi.grid, R), ScalarField1D(psi.grid, S))


def polar_trajectory(traj: Trajectory) -> Trajectory:
    """Polar pairs of every frame, with complex phases on one branch across time."""
    pairs = [polar_fields(f) for f in traj.frames]
    if traj.frames[0].sig == a2.COMPLEX:
        first = np.array([p.S.values[0] for p in pairs])
        shift = np.unwrap(first) - first
        pairs = [PolarPair(p.R, ScalarField1D(p.S.grid, p.S.values + s)) for p, s in zip(pairs, shift)]
    return Trajectory(traj.times, pairs)


def pair_trajectory(grid: Grid1D, times, R_frames, S_frames) -> Trajectory:
    return Trajectory(times, [PolarPair(ScalarField1D(grid, r), ScalarField1D(grid, s))
                              for r, s in zip(R_frames, S_frames)])


# -- density and current ------------------------------------------------------

def density_current(psi: AlgebraField1D) -> tuple[ScalarField1D, ScalarField1D]:
    """P = Psi conj(Psi) and J = (conj(Psi) grad Psi - Psi grad conj(Psi)) / (2a).

    Both are evaluated through the algebra product; the difference in J is
    a pure multiple of a, which is divided out exactly.
    """
    sig = psi.sig
    if sig not in (a2.COMPLEX, a2.DUPLEX):
        raise SignatureMismatch(f"density/current need the complex or duplex algebra, got {sig}")
    c = psi.coeffs
    cc = a2.conj_coeffs(sig, c)
    prod = a2.mul_coeffs(sig, c, cc)
    P = prod[:, 0]
    dc = gradient_array(psi.grid, c)
    dcc = gradient_array(psi.grid, cc)
    diff = a2.mul_coeffs(sig, cc, dc) - a2.mul_coeffs(sig, c, dcc)
    two_a_inv = a2.inverse(a2.Element2D(sig, 0, 2)).as_tuple()
    J = a2.mul_coeffs(sig, np.array(two_a_inv), diff)[:, 0]
    return ScalarField1D(psi.grid, P), ScalarField1D(psi.grid, J)


def current_from_polar(pair: PolarPair) -> ScalarField1D:
    """J = exp(2R) grad S."""
    return ScalarField1D(pair.S.grid, np.exp(2 * pair.R.values) * gradient_array(pair.S.grid, pair.S.values))


def continuity_residual(traj: Trajectory) -> ScalarField1D:
    """d/dt P + grad J at the middle frame, for complex or duplex trajectories."""
    psi = traj.middle
    dP = traj.time_derivative(lambda f: density_current(f)[0].values)
    J = density_current(psi)[1]
    return ScalarField1D(psi.grid, dP + gradient_array(psi.grid, J.values))


# -- CSV ---------------------------------------------------------------------

def _fmt(v):
    return format(float(v), ".17g")


def write_csv(path, columns: dict):
    """Write equal-length columns with a header row, 17 significant digits."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k])) for k in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("columns differ in length")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*arrays):
            w.writerow([_fmt(v) for v in row])


def field_to_csv(path, f):
    if isinstance(f, ScalarField1D):
        write_csv(path, {"x": f.x, "value": f.values})
    else:
        cols = {"x": f.x}
        for k in range(f.coeffs.shape[1]):
            cols[f"c{k}"] = f.coeffs[:, k]
        write_csv(path, cols)


def read_csv(path) -> dict:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        names = next(r)
        rows = [[float(v) for v in row] for row in r]
    data = np.array(rows, dtype=float).reshape(-1, len(names))
    return {k: data[:, i] for i, k in enumerate(names)}
