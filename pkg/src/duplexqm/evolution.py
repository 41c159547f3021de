"""Generalized Schrodinger operators, their polar resolutions, and integrators.

Sign conventions.  The canonical equation is

    a dPsi/dt + 1/2 Lap Psi - U Psi = 0,      a in {i, I},

which is the standard Schrodinger equation for a = i and the duplex
(diffusion) equation for a = I.  The operator written as
a^-1 d/dt + 1/2 a^-2 Lap + U (`theorem1_residual`) agrees with it for
a = i up to an overall factor -1, and for a = I only after U -> -U.
Everything else in this module follows the canonical form.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import algebra2d as a2
from . import clifford as cl
from .algebra2d import AlgebraSignature2D, Element2D, Kind
from .errors import ConvergenceError, NonInvertibleUnit, OutOfCone, SignatureMismatch, SolverBreakdown
from .field import (
    AlgebraField1D,
    Grid1D,
    PolarPair,
    ScalarField1D,
    Trajectory,
    gradient_array,
    laplacian_array,
    laplacian_matrix,
)


class PotentialKind(str, Enum):
    ZERO = "zero"
    HARMONIC = "harmonic"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """U(x): zero, harmonic c*x^2, or tabulated on a grid."""

    kind: PotentialKind = PotentialKind.ZERO
    coefficient: float = 0.0
    table: ScalarField1D | None = None

    @classmethod
    def zero(cls):
        return cls(PotentialKind.ZERO)

    @classmethod
    def harmonic(cls, coefficient=0.5):
        return cls(PotentialKind.HARMONIC, coefficient)

    @classmethod
    def tabulated(cls, table: ScalarField1D):
        return cls(PotentialKind.TABULATED, table=table)

    def evaluate(self, grid: Grid1D) -> np.ndarray:
        if self.kind is PotentialKind.ZERO:
            return np.zeros(grid.n_points)
        if self.kind is PotentialKind.HARMONIC:
            return self.coefficient * grid.x ** 2
        if self.table.grid != grid:
            raise ValueError("tabulated potential lives on a different grid")
        return self.table.values


def potential_values(U, grid: Grid1D) -> np.ndarray:
    """Accepts a PotentialSpec, ScalarField1D, array, scalar or None."""
    if U is None:
        return np.zeros(grid.n_points)
    if isinstance(U, PotentialSpec):
        return U.evaluate(grid)
    if isinstance(U, ScalarField1D):
        return U.values
    v = np.asarray(U)
    if np.iscomplexobj(v):
        raise ValueError("potentials must be real-valued")
    return np.broadcast_to(v.astype(float), (grid.n_points,))


# -- operator residuals -------------------------------------------------------

def _check_unit(a: Element2D):
    if not a2.is_invertible(a):
        raise NonInvertibleUnit(f"unit {a.as_tuple()} of {a.sig} is not invertible")


def _frame_check(traj: Trajectory, sig):
    for f in traj.frames:
        if f.sig != sig:
            raise SignatureMismatch(f"frame signature {f.sig} differs from {sig}")


def operator_residual(a: Element2D, U, traj: Trajectory) -> AlgebraField1D:
    """a dPsi/dt + 1/2 Lap Psi - U Psi at the middle frame."""
    _check_unit(a)
    _frame_check(traj, a.sig)
    psi = traj.middle
    dpsi = traj.time_derivative(lambda f: f.coeffs)
    lap = laplacian_array(psi.grid, psi.coeffs)
    u = potential_values(U, psi.grid)[:, None]
    res = a2.mul_coeffs(a.sig, np.array(a.as_tuple()), dpsi) + 0.5 * lap - u * psi.coeffs
    return AlgebraField1D(psi.grid, a.sig, res)


def theorem1_residual(a: Element2D, U, traj: Trajectory) -> AlgebraField1D:
    """a^-1 dPsi/dt + 1/2 a^-2 Lap Psi + U Psi at the middle frame.

    Equals -operator_residual(i, U) for a = i, and operator_residual(I, -U)
    for a = I.
    """
    _check_unit(a)
    _frame_check(traj, a.sig)
    psi = traj.middle
    ainv = a2.inverse(a)
    ainv2 = ainv * ainv
    dpsi = traj.time_derivative(lambda f: f.coeffs)
    lap = laplacian_array(psi.grid, psi.coeffs)
    u = potential_values(U, psi.grid)[:, None]
    res = (a2.mul_coeffs(a.sig, np.array(ainv.as_tuple()), dpsi)
           + 0.5 * a2.mul_coeffs(a.sig, np.array(ainv2.as_tuple()), lap)
           + u * psi.coeffs)
    return AlgebraField1D(psi.grid, a.sig, res)


@dataclass(frozen=True)
class PolarTerms:
    """Derivatives of (R, S) at the middle frame of a PolarPair trajectory."""

    grid: Grid1D
    R: np.ndarray
    S: np.ndarray
    R_t: np.ndarray
    S_t: np.ndarray
    R_x: np.ndarray
    S_x: np.ndarray
    R_xx: np.ndarray
    S_xx: np.ndarray

    @classmethod
    def from_trajectory(cls, traj: Trajectory):
        pair: PolarPair = traj.middle
        g = pair.R.grid
        R, S = pair.R.values, pair.S.values
        return cls(
            g, R, S,
            traj.time_derivative(lambda p: p.R.values),
            traj.time_derivative(lambda p: p.S.values),
            gradient_array(g, R), gradient_array(g, S),
            laplacian_array(g, R), laplacian_array(g, S),
        )


def _terms(pair_traj):
    return pair_traj if isinstance(pair_traj, PolarTerms) else PolarTerms.from_trajectory(pair_traj)


def resolve_polar(kind: Kind, pair_traj, U) -> tuple[ScalarField1D, ScalarField1D]:
    """Left-hand sides of the real PDE pair obtained from Psi = exp(R + a S).

    Elliptic (a = i):
        -S_t + 1/2 R_xx + 1/2 R_x^2 - 1/2 S_x^2 - U
         R_t + 1/2 S_xx + S_x R_x
    Hyperbolic (a = I, U plays W):
         S_t + 1/2 R_xx + 1/2 R_x^2 + 1/2 S_x^2 - W
         R_t + 1/2 S_xx + S_x R_x
    The second (continuity) equation is the same array in both cases.
    """
    t = _terms(pair_traj)
    u = potential_values(U, t.grid)
    kind = Kind(kind)
    if kind is Kind.ELLIPTIC:
        eq1 = -t.S_t + 0.5 * t.R_xx + 0.5 * t.R_x ** 2 - 0.5 * t.S_x ** 2 - u
    elif kind is Kind.HYPERBOLIC:
        eq1 = t.S_t + 0.5 * t.R_xx + 0.5 * t.R_x ** 2 + 0.5 * t.S_x ** 2 - u
    else:
        raise ValueError("resolve_polar covers the elliptic and hyperbolic cases")
    eq2 = t.R_t + 0.5 * t.S_xx + t.S_x * t.R_x
    return ScalarField1D(t.grid, eq1), ScalarField1D(t.grid, eq2)


def isotropic_residual(pair_traj, W) -> tuple[ScalarField1D, ScalarField1D]:
    """Light-cone channels of the duplex pair: (eq1 + eq2, eq1 - eq2).

    plus  = d_t(S+R) + 1/2 Lap(S+R) + 1/2 (grad(S+R))^2 - W
    minus = d_t(S-R) + 1/2 Lap(R-S) + 1/2 (grad(R-S))^2 - W
    plus * exp(R+S) is the backward-heat operator applied to exp(R+S).
    """
    eq1, eq2 = resolve_polar(Kind.HYPERBOLIC, pair_traj, W)
    g = eq1.grid
    return ScalarField1D(g, eq1.values + eq2.values), ScalarField1D(g, eq1.values - eq2.values)


def general_basis_residual(sig: AlgebraSignature2D, pair_traj, U) -> tuple[ScalarField1D, ScalarField1D]:
    """The two real equations for a general unit a^2 = alpha + beta a, as published:

    (i)  R_t + 1/2 S_xx + S_x R_x + beta (S_t + 1/2 S_x^2 + U)
    (ii) 1/2 R_xx + 1/2 R_x^2 + alpha (S_t + 1/2 S_x^2)

    Note (ii) carries no potential term; compare `general_basis_expansion`.
    """
    t = _terms(pair_traj)
    u = potential_values(U, t.grid)
    eq_i = t.R_t + 0.5 * t.S_xx + t.S_x * t.R_x + sig.beta * (t.S_t + 0.5 * t.S_x ** 2 + u)
    eq_ii = 0.5 * t.R_xx + 0.5 * t.R_x ** 2 + sig.alpha * (t.S_t + 0.5 * t.S_x ** 2)
    return ScalarField1D(t.grid, eq_i), ScalarField1D(t.grid, eq_ii)


def general_basis_expansion(sig: AlgebraSignature2D, pair_traj, U) -> tuple[ScalarField1D, ScalarField1D]:
    """a^2 Psi^-1 (a^-1 d/dt + 1/2 a^-2 Lap + U) Psi split into (a-part, scalar part).

    Direct expansion with Psi = exp(R + a S):
        a-part: R_t + 1/2 S_xx + S_x R_x + beta (S_t + 1/2 S_x^2 + U)
        scalar: 1/2 R_xx + 1/2 R_x^2 + alpha (S_t + 1/2 S_x^2 + U)
    """
    t = _terms(pair_traj)
    u = potential_values(U, t.grid)
    core = t.S_t + 0.5 * t.S_x ** 2 + u
    a_part = t.R_t + 0.5 * t.S_xx + t.S_x * t.R_x + sig.beta * core
    scalar = 0.5 * t.R_xx + 0.5 * t.R_x ** 2 + sig.alpha * core
    return ScalarField1D(t.grid, a_part), ScalarField1D(t.grid, scalar)


def idempotent_residual(pair_traj, W) -> tuple[ScalarField1D, ScalarField1D]:
    """The a^2 = a system: (Lap R + R_x^2 - 2W, d_t(R+S) + 1/2 S_xx + 1/2 S_x^2 + S_x R_x)."""
    t = _terms(pair_traj)
    w = potential_values(W, t.grid)
    first = t.R_xx + t.R_x ** 2 - 2 * w
    second = t.R_t + t.S_t + 0.5 * t.S_xx + 0.5 * t.S_x ** 2 + t.S_x * t.R_x
    return ScalarField1D(t.grid, first), ScalarField1D(t.grid, second)


# -- Crank-Nicolson for the complex equation ------------------------------------

def _factorize(mat):
    try:
        return spla.splu(mat.tocsc())
    except RuntimeError as exc:
        raise SolverBreakdown(f"singular system: {exc}") from exc


class CrankNicolson:
    """(1 + i dt/2 H) Psi' = (1 - i dt/2 H) Psi with H = -1/2 Lap + U.

    Dirichlet grids hold Psi = 0 at both ends; periodic grids give a cyclic
    tridiagonal system.  The LU factorization is computed once.
    """

    def __init__(self, grid: Grid1D, U, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.grid = grid
        self.dt = dt
        u = potential_values(U, grid)
        if not grid.periodic:
            u = u[1:-1]
        H = -0.5 * laplacian_matrix(grid) + sp.diags(u)
        eye = sp.identity(H.shape[0], dtype=complex, format="csc")
        self._lhs = _factorize(eye + 0.5j * dt * H)
        self._rhs = (eye - 0.5j * dt * H).tocsr()

    def step_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.grid.periodic:
            return self._lhs.solve(self._rhs @ z)
        out = np.zeros_like(z)
        out[1:-1] = self._lhs.solve(self._rhs @ z[1:-1])
        return out

    def step(self, psi: AlgebraField1D) -> AlgebraField1D:
        return AlgebraField1D.from_complex(self.grid, self.step_array(psi.to_complex()))

    def run(self, psi: AlgebraField1D, n_steps: int, t0: float = 0.0, stride: int = 1):
        """Take n_steps; return (times, frames) every ``stride`` steps plus the last."""
        z = psi.to_complex()
        times, frames = [t0], [psi]
        for k in range(1, n_steps + 1):
            z = self.step_array(z)
            if k % stride == 0 or k == n_steps:
                times.append(t0 + k * self.dt)
                frames.append(AlgebraField1D.from_complex(self.grid, z))
        return np.array(times), frames


def crank_nicolson_step(psi: AlgebraField1D, U, dt: float) -> AlgebraField1D:
    return CrankNicolson(psi.grid, U, dt).step(psi)


def discrete_norm(psi: AlgebraField1D) -> float:
    """Sum of Psi conj(Psi) h over the grid."""
    return float(np.sum(a2.norm_sq_coeffs(psi.sig, psi.coeffs)) * psi.grid.h)


# -- duplex light-cone channels as a heat pair ----------------------------------

class HeatChannel:
    """Implicit Euler for d_s phi = 1/2 Lap phi - W phi in the well-posed direction s."""

    def __init__(self, grid: Grid1D, W, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.grid = grid
        w = potential_values(W, grid)
        if not grid.periodic:
            w = w[1:-1]
        A = sp.identity(len(w), format="csc") - dt * (0.5 * laplacian_matrix(grid) - sp.diags(w))
        self._lu = _factorize(A)

    def step(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.grid.periodic:
            out = self._lu.solve(v)
        else:
            out = np.zeros_like(v)
            out[1:-1] = self._lu.solve(v[1:-1])
        neg = np.flatnonzero(out < 0)
        if neg.size:
            raise OutOfCone(f"heat channel turned negative at grid index {neg[0]}", int(neg[0]))
        return out


def heat_pair_step(phi_minus: ScalarField1D, phi_plus: ScalarField1D, W, dt: float):
    """Advance phi_minus forward by dt and phi_plus backward by dt.

    phi_minus: d_t phi = 1/2 Lap phi - W phi   (forward heat)
    phi_plus:  d_t phi = -1/2 Lap phi + W phi  (forward heat in reversed time)
    """
    ch = HeatChannel(phi_minus.grid, W, dt)
    return (ScalarField1D(phi_minus.grid, ch.step(phi_minus.values)),
            ScalarField1D(phi_plus.grid, ch.step(phi_plus.values)))


def heat_pair_trajectory(phi_minus_0: ScalarField1D, phi_plus_T: ScalarField1D, W,
                         dt: float, n_steps: int) -> Trajectory:
    """Duplex trajectory Psi(t_k) = phi_plus gamma + phi_minus gamma_bar on t_k = k dt.

    phi_minus is given at t = 0, phi_plus at t = T = n_steps * dt.
    """
    grid = phi_minus_0.grid
    ch = HeatChannel(grid, W, dt)
    minus = [phi_minus_0.values]
    for _ in range(n_steps):
        minus.append(ch.step(minus[-1]))
    plus = [phi_plus_T.values]
    for _ in range(n_steps):
        plus.append(ch.step(plus[-1]))
    plus.reverse()
    frames = [assemble_duplex(grid, p, m) for p, m in zip(plus, minus)]
    return Trajectory(dt * np.arange(n_steps + 1), frames)


def assemble_duplex(grid: Grid1D, phi_plus, phi_minus) -> AlgebraField1D:
    """phi_plus gamma + phi_minus gamma_bar with gamma = (1 + I)/2."""
    p = np.asarray(phi_plus, dtype=float)
    m = np.asarray(phi_minus, dtype=float)
    return AlgebraField1D(grid, a2.DUPLEX, np.stack([(p + m) / 2, (p - m) / 2], axis=-1))


def split_duplex(psi: AlgebraField1D):
    """Inverse of `assemble_duplex`: (phi_plus, phi_minus)."""
    c = psi.coeffs
    return c[:, 0] + c[:, 1], c[:, 0] - c[:, 1]


# -- stationary states ------------------------------------------------------------

@dataclass(frozen=True)
class StationaryState:
    energy: float
    wavefunction: ScalarField1D
    index: int

    @property
    def nodes(self) -> int:
        return count_nodes(self.wavefunction.values)


def count_nodes(u, rel_tol=1e-8) -> int:
    u = np.asarray(u)
    sig = u[np.abs(u) > rel_tol * np.max(np.abs(u))]
    return int(np.count_nonzero(np.diff(np.sign(sig)) != 0))


def stationary_solve(U, grid: Grid1D, k: int) -> list[StationaryState]:
    """Lowest k eigenpairs of H = -1/2 Lap + U with Psi = 0 at both ends."""
    if grid.periodic:
        raise ValueError("stationary_solve needs a Dirichlet grid")
    if k < 1 or k > grid.n_points // 4:
        raise ValueError(f"k must lie in [1, {grid.n_points // 4}]")
    h = grid.h
    u = potential_values(U, grid)[1:-1]
    diag = 1.0 / h ** 2 + u
    off = np.full(len(diag) - 1, -0.5 / h ** 2)
    try:
        w, v = scipy.linalg.eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"tridiagonal eigensolver exhausted its iteration budget: {exc}") from exc
    states = []
    for n in range(k):
        psi = np.zeros(grid.n_points)
        psi[1:-1] = v[:, n]
        psi /= np.sqrt(np.sum(psi ** 2) * h)
        lead = psi[np.argmax(np.abs(psi) > 1e-3 * np.max(np.abs(psi)))]
        if lead < 0:
            psi = -psi
        states.append(StationaryState(float(w[n]), ScalarField1D(grid, psi), n))
    return states


# -- Clifford and quaternionic forms -------------------------------------------------

def _clifford_parts(sig: cl.CliffordSignature, U, traj: Trajectory):
    _frame_check(traj, sig)
    psi = traj.middle
    dpsi = traj.time_derivative(lambda f: f.coeffs)
    lap = laplacian_array(psi.grid, psi.coeffs)
    u = potential_values(U, psi.grid)[:, None]
    s = cl.pseudoscalar_square(sig).closed_form
    return psi, dpsi, 0.5 * lap + s * u * psi.coeffs, s


def clifford_schrodinger_residual(sig: cl.CliffordSignature, U, traj: Trajectory,
                                  check: bool = True) -> AlgebraField1D:
    """e_I dPsi/dt + 1/2 Lap Psi + s U Psi with s = e_I^2.

    This is -e_I dPsi/dt = 1/2 Lap Psi + s U Psi with all terms on one side,
    e_I acting from the left.  For R_{1,0} it coincides with
    `operator_residual` at a = i.  With ``check`` the componentwise form is
    evaluated too and must be e_I^-1 times this residual.
    """
    if sig.n > 4:
        raise ValueError("Clifford residuals are limited to n <= 4")
    psi, dpsi, rest, s = _clifford_parts(sig, U, traj)
    e_i = cl.CliffordElement.pseudoscalar(sig).coeffs
    res = cl.mv_mul_coeffs(sig, e_i, dpsi) + rest
    if check:
        comp = clifford_component_residuals(sig, U, traj).coeffs
        relabeled = cl.mv_mul_coeffs(sig, cl.inverse_pseudoscalar(sig).coeffs, res)
        scale = max(1.0, float(np.max(np.abs(res))), float(np.max(np.abs(comp))))
        if not np.allclose(comp, relabeled, rtol=0, atol=1e-10 * scale):
            raise AssertionError("component residuals are not a relabeling of the multivector residual")
    return AlgebraField1D(psi.grid, sig, res)


def clifford_component_residuals(sig: cl.CliffordSignature, U, traj: Trajectory) -> AlgebraField1D:
    """d_t Psi_A + s sigma_A (1/2 Lap Psi_Ac + s U Psi_Ac) for every blade A.

    A^c is the complement of A and sigma_A the sign in e_I e_Ac = sigma_A e_A.
    """
    psi, dpsi, rest, s = _clifford_parts(sig, U, traj)
    top = sig.dim - 1
    comp_idx = top ^ np.arange(sig.dim)
    sigma = cl.sign_table(sig)[top, comp_idx].astype(float)
    res = dpsi + s * sigma * rest[:, comp_idx]
    return AlgebraField1D(psi.grid, sig, res)


def quaternion_pair_residual(psi_traj: Trajectory, phi_traj: Trajectory, U):
    """Residuals of the quaternionic pair for Psi = psi + k phi, U real:

    r1 = d_t psi + 1/2 Lap phi - U phi
    r2 = d_t phi - 1/2 Lap psi + U psi
    """
    psi = psi_traj.middle.to_complex()
    phi = phi_traj.middle.to_complex()
    g = psi_traj.middle.grid
    u = potential_values(U, g)
    dpsi = psi_traj.time_derivative(lambda f: f.to_complex())
    dphi = phi_traj.time_derivative(lambda f: f.to_complex())
    lap = lambda z: laplacian_array(g, z.real) + 1j * laplacian_array(g, z.imag)
    r1 = dpsi + 0.5 * lap(phi) - u * phi
    r2 = dphi - 0.5 * lap(psi) + u * psi
    return AlgebraField1D.from_complex(g, r1), AlgebraField1D.from_complex(g, r2)
