"""Named analytic scenarios shared by the CLI and the tests.

Each scenario supplies closed-form (R, S) of a complex Schrodinger solution
exp(R + iS), its potential, and where its amplitude vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import hermite

from .evolution import PotentialSpec
from .field import AlgebraField1D, Boundary, Grid1D, Trajectory, pair_trajectory


@dataclass(frozen=True)
class Scenario:
    name: str
    potential: PotentialSpec
    energy: float
    domain: tuple[float, float]
    amplitude: Callable[[np.ndarray], np.ndarray]
    phase: Callable[[np.ndarray, float], np.ndarray]
    boundary: Boundary = Boundary.DIRICHLET
    has_nodes: bool = False

    def grid(self, h: float, domain=None) -> Grid1D:
        lo, hi = domain or self.domain
        return Grid1D.with_spacing(lo, hi, h, self.boundary)

    def R(self, x):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.amplitude(x)))

    def S(self, x, t, perturb=0.0):
        s = self.phase(x, t)
        if perturb:
            s = s + perturb * np.sin(x)
        return s

    def psi(self, x, t):
        return self.amplitude(x) * np.exp(1j * self.phase(x, t))

    def pair_trajectory(self, grid: Grid1D, t0: float, dt: float, perturb: float = 0.0,
                        n_frames: int = 3) -> Trajectory:
        times = t0 + dt * (np.arange(n_frames) - n_frames // 2)
        x = grid.x
        R = self.R(x)
        return pair_trajectory(grid, times, [R] * n_frames, [self.S(x, t, perturb) for t in times])

    def psi_trajectory(self, grid: Grid1D, t0: float, dt: float, n_frames: int = 3) -> Trajectory:
        times = t0 + dt * (np.arange(n_frames) - n_frames // 2)
        return Trajectory(times, [AlgebraField1D.from_complex(grid, self.psi(grid.x, t)) for t in times])


def plane_wave(p: float = 1.0, domain=(0.0, 2 * math.pi)) -> Scenario:
    E = p * p / 2
    return Scenario(f"plane-wave-{p:g}", PotentialSpec.zero(), E, domain,
                    lambda x: np.ones_like(x), lambda x, t: p * x - E * t, Boundary.DIRICHLET)


def oscillator(n: int, domain=(-8.0, 8.0)) -> Scenario:
    """U = x^2/2, u_n = H_n(x) exp(-x^2/2), E_n = n + 1/2."""
    coef = np.zeros(n + 1)
    coef[n] = 1.0
    norm = 1.0 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    E = n + 0.5

    def amplitude(x):
        return norm * hermite.hermval(x, coef) * np.exp(-x * x / 2)

    def phase(x, t):
        return -E * t + np.where(amplitude(x) < 0, math.pi, 0.0)

    return Scenario(f"oscillator-{n}", PotentialSpec.harmonic(0.5), E, domain, amplitude, phase,
                    has_nodes=n > 0)


def box(n: int) -> Scenario:
    """U = 0 on [0, pi] with hard walls, u_n = sin((n+1) x), E_n = (n+1)^2/2."""
    m = n + 1
    E = m * m / 2

    def amplitude(x):
        return math.sqrt(2 / math.pi) * np.sin(m * x)

    def phase(x, t):
        return -E * t + np.where(amplitude(x) < 0, math.pi, 0.0)

    return Scenario(f"box-{n}", PotentialSpec.zero(), E, (0.0, math.pi), amplitude, phase, has_nodes=True)


def get(name: str, p: float = 1.0) -> Scenario:
    """Look up 'free', 'plane-wave', 'plane-wave-<p>', 'oscillator-<n>' or 'box-<n>'."""
    if name == "free":
        return plane_wave(p)
    if name.startswith("plane-wave"):
        rest = name[len("plane-wave"):].lstrip("-")
        return plane_wave(float(rest) if rest else p)
    for prefix, make in (("oscillator-", oscillator), ("box-", box)):
        if name.startswith(prefix):
            n = int(name[len(prefix):])
            if n < 0:
                raise ValueError("state index must be non-negative")
            return make(n)
    raise KeyError(f"unknown scenario {name!r}")


NAMES = ("free", "plane-wave-<p>", "oscillator-<n>", "box-<n>")
