"""Closed-form fields shared by the test modules."""
import numpy as np

from duplexqm import algebra2d as a2
from duplexqm.evolution import PolarTerms
from duplexqm.field import AlgebraField1D, PolarPair, ScalarField1D, Trajectory


def smooth_RS(x, t):
    """A smooth (R, S) pair with hand-computed derivatives."""
    R = -0.25 * x ** 2 + 0.1 * t * x + 0.05 * np.sin(x)
    S = 0.7 * x + 0.3 * np.cos(x) * (1 + t) - 0.4 * t ** 2
    return {
        "R": R, "S": S,
        "R_t": 0.1 * x,
        "S_t": 0.3 * np.cos(x) - 0.8 * t,
        "R_x": -0.5 * x + 0.1 * t + 0.05 * np.cos(x),
        "S_x": 0.7 - 0.3 * np.sin(x) * (1 + t),
        "R_xx": -0.5 - 0.05 * np.sin(x),
        "S_xx": -0.3 * np.cos(x) * (1 + t),
    }


def exact_terms(grid, t, fn=smooth_RS):
    return PolarTerms(grid=grid, **fn(grid.x, t))


def pair_trajectory(grid, t, dt, fn=smooth_RS):
    ts = [t - dt, t, t + dt]
    pairs = []
    for s in ts:
        d = fn(grid.x, s)
        pairs.append(PolarPair(ScalarField1D(grid, d["R"]), ScalarField1D(grid, d["S"])))
    return Trajectory(ts, pairs)


def psi_trajectory(sig, grid, t, dt, fn=smooth_RS):
    ts = [t - dt, t, t + dt]
    frames = []
    for s in ts:
        d = fn(grid.x, s)
        frames.append(AlgebraField1D.from_polar(grid, sig, d["R"], d["S"]))
    return Trajectory(ts, frames)


def divide(sig, num, den):
    """Pointwise num / den through the algebra."""
    inv = a2.conj_coeffs(sig, den) / a2.norm_sq_coeffs(sig, den)[:, None]
    return a2.mul_coeffs(sig, num, inv)


def free_gaussian(x, t, sigma=1.0, k=0.0):
    """Exact free solution of i psi_t + psi_xx / 2 = 0, normalized."""
    s = sigma ** 2 + 1j * t
    envelope = np.exp(-(x - k * t) ** 2 / (2 * s))
    return (sigma ** 2 / np.pi) ** 0.25 / np.sqrt(s) * envelope * np.exp(1j * k * x - 0.5j * k * k * t)
