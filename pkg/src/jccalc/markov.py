"""The Markov process driven by the heat kernel: tables, sampling, paths.

Transition kernels are K_t(x, dy) = p_t(x, y) A(y) dy.  These are genuine
probability kernels: the total mass equals 1 for every x (the kernel
family is conservative; see jccalc.heat).  The sampler nevertheless keeps
an explicit per-step survival parameter with a KILLED absorbing state, so
sub-probability tables (e.g. externally truncated or reweighted kernels)
can be simulated with the same machinery; for tables built here survival
is the tabulated mass and killing is a null event up to quadrature noise.

The absolute value of the process is a diffusion whose generator is the
restriction of T^2 to even functions, d^2/dx^2 + (A'/A) d/dx + rho^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .operators import EvaluableFunction, apply_T2
from .params import JacobiParams
from .quadrature import QuadratureConfig
from .heat import kernel_mass
from .spectral import SpectralGrid
from .specfun import dlog_deriv_A, log_deriv_A, weight_A

__all__ = [
    "KILLED",
    "TransitionTable",
    "build_transition_table",
    "sample_step",
    "simulate_paths",
    "PathSample",
    "radial_generator_check",
]

KILLED = "KILLED"

_CLIP_MASS_LIMIT = 1e-8


@dataclass
class TransitionTable:
    """Tabulated one-step transition law on a fixed y-grid.

    Each x-node carries a normalized CDF over y; survival is the total
    (sub-)probability mass of one step, with 1 - survival the killing
    probability.
    """

    t_step: float
    params: JacobiParams
    x_nodes: np.ndarray
    y_grid: np.ndarray
    densities: np.ndarray  # (n_x, n_y), >= 0 after clipping
    cdfs: np.ndarray       # (n_x, n_y), 0 -> 1
    survival: float

    def __post_init__(self) -> None:
        if self.t_step <= 0:
            raise ValueError("t_step must be positive")
        if not 0.0 < self.survival <= 1.0:
            raise ValueError("survival must lie in (0, 1]")
        if np.any(np.diff(self.cdfs, axis=1) < -1e-12):
            raise ValueError("CDFs must be nondecreasing")

    def inverse_cdf(self, ix: int, u: np.ndarray) -> np.ndarray:
        cdf = self.cdfs[ix]
        keep = np.concatenate([[True], np.diff(cdf) > 1e-14])
        interp = PchipInterpolator(cdf[keep], self.y_grid[keep])
        return interp(np.clip(u, cdf[keep][0], cdf[keep][-1]))


class MassMismatchError(RuntimeError):
    """Tabulated kernel mass deviates from the quadrature reference."""


def build_transition_table(
    p: JacobiParams,
    t_step: float,
    x_nodes: Sequence[float],
    y_grid: Sequence[float],
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> TransitionTable:
    """Tabulate p_t(x, .) A(.) per x-node and normalize to CDFs.

    The trapezoid mass of each row is verified against the adaptive
    quadrature mass (which equals 1 analytically) to 1e-5 relative; a
    larger deviation means the y-grid is too narrow or too coarse.
    """
    x_nodes = np.asarray(x_nodes, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    if np.any(np.diff(y_grid) <= 0):
        raise ValueError("y_grid must be strictly increasing")
    grid = grid or SpectralGrid(p, cfg, t_min=t_step)
    m, mc = grid.multiplier(t_step)
    aw = weight_A(p, y_grid)

    densities = np.empty((x_nodes.size, y_grid.size))
    masses = np.empty(x_nodes.size)
    for i, x in enumerate(x_nodes):
        row = np.array([grid.pair_integral(m, mc, float(x), float(y))[0] for y in y_grid]) * aw
        clipped = np.clip(row, 0.0, None)
        clip_mass = float(np.trapezoid(clipped - row, y_grid))
        if clip_mass > _CLIP_MASS_LIMIT:
            raise MassMismatchError(f"negative density mass {clip_mass:.3e} at x={x}")
        densities[i] = clipped
        masses[i] = float(np.trapezoid(clipped, y_grid))

    reference = kernel_mass(p, t_step, float(x_nodes[0]), cfg, grid=grid)
    for i, x in enumerate(x_nodes):
        if abs(masses[i] - reference) > 1e-5 * reference:
            raise MassMismatchError(
                f"tabulated mass {masses[i]:.8f} at x={x} deviates from quadrature "
                f"mass {reference:.8f}; widen or refine y_grid"
            )

    cdfs = np.concatenate(
        [np.zeros((x_nodes.size, 1)),
         np.cumsum(0.5 * (densities[:, 1:] + densities[:, :-1]) * np.diff(y_grid), axis=1)],
        axis=1,
    )
    cdfs /= cdfs[:, -1:]
    survival = min(1.0, float(np.mean(masses)))
    return TransitionTable(t_step, p, x_nodes, y_grid, densities, cdfs, survival)


def sample_step(
    table: TransitionTable,
    x: float,
    rng: np.random.Generator,
) -> Union[float, str]:
    """One transition from x: KILLED with probability 1 - survival, else
    an inverse-CDF draw blended between the two bracketing x-nodes."""
    xn = table.x_nodes
    if x < xn[0] - 1e-12 or x > xn[-1] + 1e-12:
        raise ValueError(f"x={x} outside the table range [{xn[0]}, {xn[-1]}]")
    if rng.random() >= table.survival:
        return KILLED
    j = int(np.clip(np.searchsorted(xn, x) - 1, 0, xn.size - 2))
    w = (x - xn[j]) / (xn[j + 1] - xn[j])
    ix = j + 1 if rng.random() < w else j
    u = rng.random()
    return float(table.inverse_cdf(ix, np.asarray([u]))[0])


@dataclass
class PathSample:
    times: np.ndarray
    states: list  # floats, then KILLED markers after the first killing
    seed: int


def simulate_paths(
    table: TransitionTable,
    x0: float,
    n_steps: int,
    n_paths: int,
    seed: int,
) -> list[PathSample]:
    """Simulate independent paths; KILLED is absorbing.  Reproducible."""
    streams = [np.random.Generator(np.random.Philox(key=seed + 1000003 * k)) for k in range(n_paths)]
    times = np.arange(n_steps + 1) * table.t_step
    out = []
    for k, rng in enumerate(streams):
        states: list = [float(x0)]
        alive = True
        for _ in range(n_steps):
            if not alive:
                states.append(KILLED)
                continue
            nxt = sample_step(table, states[-1], rng)
            if nxt == KILLED:
                alive = False
            states.append(nxt)
        out.append(PathSample(times, states, seed + 1000003 * k))
    return out


def radial_generator_check(
    p: JacobiParams,
    f_even,
    x: float,
) -> tuple[float, float]:
    """Both forms of the even-function generator at x > 0.

    lhs applies the full second-order operator; rhs assembles
    f'' + (A'/A) f' + rho^2 f directly.  They must coincide because the
    reflection-difference part vanishes on even functions.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    f = f_even if isinstance(f_even, EvaluableFunction) else EvaluableFunction(f_even, parity="even")
    lhs = float(np.real(apply_T2(p, f, float(x))))
    rhs = float(
        np.real(f.deriv2(np.asarray(float(x))))
        + log_deriv_A(p, x) * np.real(f.deriv1(np.asarray(float(x))))
        + p.rho ** 2 * np.real(f(np.asarray(float(x))))
    )
    return lhs, rhs
