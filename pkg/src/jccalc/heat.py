"""Fundamental solution, heat kernel, and heat semigroup.

The kernel is the spectral integral

    p_t(x, y) = int exp(-t(lam^2 + rho^2)/2) G_lam(x) G_lam(-y) s(lam) dlam,

a real, symmetric, strictly positive family with p_t(x, y) = p_t(-y, -x)
and p_t(x, 0) equal to the fundamental solution F_t(x).  The family is
conservative: int p_t(x, y) A(y) dy = 1 for every x and t (the constant
function is harmonic for the generator (T^2 - rho^2)/2).  The weighted
mass int p_t(x, y) G_0(y) A(y) dy = exp(-t rho^2 / 2) G_0(x) carries the
spectral-gap factor instead; the two statements are distinguished by the
ground state G_0 being non-constant for this operator family.

Semigroup applications run either through the spectral multiplier (default)
or through the kernel integral (the convolution route), which must agree.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .functions import SampledFunction
from .operators import EvaluableFunction, apply_T2
from .params import JacobiParams
from .quadrature import GaussianDecay, QuadratureConfig, SupportRadius, integrate_line
from .spectral import SpectralGrid
from .specfun import eigenfunction_G, plancherel_density, weight_A
from .transform import spectral_callback

__all__ = [
    "fundamental_solution",
    "heat_kernel",
    "HeatKernelField",
    "fill_heat_field",
    "HeatSemigroupResult",
    "semigroup_apply",
    "heat_residual",
    "chapman_kolmogorov_check",
    "kernel_mass",
    "weighted_kernel_mass",
]


def _real_from(value: complex, cfg: QuadratureConfig, what: str) -> float:
    if abs(value.imag) > 100.0 * cfg.abs_tol * (1.0 + abs(value.real)):
        raise ArithmeticError(f"{what}: imaginary residue {value.imag:.3e}")
    return float(value.real)


def kernel_support(p: JacobiParams, t: float, x: float, cfg: QuadratureConfig,
                   extra: float = 0.0) -> SupportRadius:
    """Truncation radius for integrals of p_t(x, .) A(.) in the second slot.

    The true integrand decays like exp(-(y - x)^2/(2t) + rho |y|); past the
    analytic support the computed kernel is pure quadrature noise that the
    exponentially growing weight would amplify, so these integrals must not
    rely on tail probing.
    """
    width = math.sqrt(2.0 * t * math.log(1.0 / cfg.abs_tol))
    return SupportRadius(min(cfg.max_radius, abs(x) + p.rho * t + 1.5 * width + 4.0 + extra))


def noise_horizon(p: JacobiParams, budget: float = 3e-9) -> float:
    """Largest |y| where kernel-evaluation noise times A(y) stays under budget.

    The spectral quadrature computes p_t(x, y) with absolute error around
    eps * (1+|y|) exp(-rho |y|) (the L1 scale of its integrand); multiplied
    by A(y) ~ exp(2 rho |y|) / 4^rho this grows like exp(rho |y|).  Pure
    weight-1 mass integrals cannot see the kernel past this horizon in
    double precision.
    """
    noise0 = 1e-16
    y = np.linspace(0.5, 60.0, 1200)
    amplified = noise0 * (1.0 + y) * np.exp(p.rho * y) * 4.0 ** (-p.rho)
    below = amplified <= budget
    return float(y[below][-1]) if np.any(below) else 0.5


def fundamental_solution(p: JacobiParams, t: float, x: float, cfg: QuadratureConfig) -> float:
    """F_t(x), the inverse transform of the heat multiplier."""
    if t <= 0:
        raise ValueError("t must be positive")
    x = float(x)

    def integrand(lams: np.ndarray) -> np.ndarray:
        m = np.exp(-0.5 * t * (lams ** 2 + p.rho ** 2))
        return m * eigenfunction_G(p, lams, x) * plancherel_density(p, lams)

    res = integrate_line(integrand, GaussianDecay(t), cfg)
    if not res.converged:
        warnings.warn(f"fundamental solution quadrature: {res.reason}")
    return _real_from(complex(res.value), cfg, "fundamental solution")


def heat_kernel(p: JacobiParams, t: float, x: float, y: float, cfg: QuadratureConfig) -> float:
    """p_t(x, y) by adaptive spectral quadrature."""
    if t <= 0:
        raise ValueError("t must be positive")
    x, y = float(x), float(y)

    def integrand(lams: np.ndarray) -> np.ndarray:
        m = np.exp(-0.5 * t * (lams ** 2 + p.rho ** 2))
        return (
            m
            * eigenfunction_G(p, lams, x)
            * eigenfunction_G(p, lams, -y)
            * plancherel_density(p, lams)
        )

    res = integrate_line(integrand, GaussianDecay(t), cfg)
    if not res.converged:
        warnings.warn(f"heat kernel quadrature: {res.reason}")
    return _real_from(complex(res.value), cfg, "heat kernel")


@dataclass
class HeatKernelField:
    """Kernel values on an (x, y) grid with per-cell error estimates."""

    t: float
    params: JacobiParams
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    error_estimates: np.ndarray

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise ValueError("t must be positive")
        floor = float(np.min(self.values))
        if floor < -1e-9:
            raise ValueError(f"kernel field has a negative value {floor}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "t": self.t,
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "xs": [float(v) for v in self.xs],
                "ys": [float(v) for v in self.ys],
                "values": [[float(v) for v in row] for row in self.values],
                "err": [[float(v) for v in row] for row in self.error_estimates],
            },
            indent=2,
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "HeatKernelField":
        d = json.loads(text)
        return HeatKernelField(
            d["t"],
            JacobiParams(d["alpha"], d["beta"]),
            np.asarray(d["xs"], dtype=float),
            np.asarray(d["ys"], dtype=float),
            np.asarray(d["values"], dtype=float),
            np.asarray(d["err"], dtype=float),
        )


def fill_heat_field(
    p: JacobiParams,
    t: float,
    xs: Sequence[float],
    ys: Sequence[float],
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> HeatKernelField:
    """Tabulate p_t on xs x ys, sharing eigenfunction values across cells."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    grid = grid or SpectralGrid(p, cfg, t_min=t)
    vals = np.empty((xs.size, ys.size))
    errs = np.empty_like(vals)
    m, mc = grid.multiplier(t)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            vals[i, j], errs[i, j] = grid.pair_integral(m, mc, float(x), float(y))
    return HeatKernelField(t, p, xs, ys, vals, errs)


@dataclass
class HeatSemigroupResult:
    t: float
    input: SampledFunction
    output: SampledFunction
    route: Literal["spectral", "convolution"]

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("t must be nonnegative")




def semigroup_apply(
    p: JacobiParams,
    t: float,
    f: SampledFunction,
    xs: Sequence[float],
    route: Literal["spectral", "convolution"],
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> HeatSemigroupResult:
    """P_t f on the grid xs by the chosen route; t = 0 returns f unchanged."""
    xs = np.asarray(xs, dtype=float)
    if t == 0.0:
        out = SampledFunction(xs, np.asarray(f(xs)), f.decay)
        return HeatSemigroupResult(0.0, f, out, route)
    if t < 0:
        raise ValueError("t must be nonnegative")

    if route == "spectral":
        hf = spectral_callback(p, f, cfg)

        def g(lams: np.ndarray) -> np.ndarray:
            return np.exp(-0.5 * t * (lams ** 2 + p.rho ** 2)) * hf(lams)

        from .transform import inverse_values

        vals = inverse_values(p, g, xs, cfg, GaussianDecay(t), real_output=f.is_real())
    elif route == "convolution":
        grid = grid or SpectralGrid(p, cfg, t_min=t)
        m, mc = grid.multiplier(t)
        vals = np.empty(xs.shape)
        for i, x in enumerate(xs):

            def integrand(ys: np.ndarray) -> np.ndarray:
                kern = np.array([grid.pair_integral(m, mc, float(x), float(yy))[0] for yy in ys])
                return np.asarray(f(ys)) * kern * weight_A(p, ys)

            res = integrate_line(integrand, kernel_support(p, t, float(x), cfg), cfg)
            if not res.converged:
                warnings.warn(f"semigroup direct route at x={x}: {res.reason}")
            vals[i] = _real_from(complex(res.value), cfg, "semigroup direct route")
    else:
        raise ValueError(f"unknown route {route!r}")

    out = SampledFunction(xs, np.asarray(vals), f.decay)
    return HeatSemigroupResult(t, f, out, route)


def heat_residual(
    p: JacobiParams,
    t: float,
    x: float,
    mult: Callable[[np.ndarray, float], np.ndarray],
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> float:
    """Heat-operator residual d/dt u - (T^2 - rho^2) u / 2 at (x, t).

    u is given by its spectral coefficient: u(x, t) = int mult(lam, t)
    G_lam(x) s(lam) dlam.  The time derivative uses Richardson-extrapolated
    central differences with step 1e-4 t; the space part goes through the
    operator module on the spectrally evaluated profile.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    grid = grid or SpectralGrid(p, cfg, t_min=0.5 * t)

    def u(xs: np.ndarray, tt: float) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        coeff = mult(grid.nodes, tt)
        out = np.empty(xs.shape)
        for i, xx in enumerate(xs):
            gx, _ = grid.eig(float(xx))
            val = np.sum(coeff * gx * grid.dens * grid.weights)
            out[i] = _real_from(complex(val), cfg, "heat residual profile")
        return out

    h = 1e-4 * t

    def dt(hh: float) -> float:
        return float((u(np.asarray([x]), t + hh) - u(np.asarray([x]), t - hh))[0] / (2.0 * hh))

    du_dt = (4.0 * dt(h / 2.0) - dt(h)) / 3.0

    profile = EvaluableFunction(lambda xs: u(xs, t))
    t2 = float(np.real(apply_T2(p, profile, float(x))))
    u_here = float(u(np.asarray([x]), t)[0])
    return du_dt - 0.5 * (t2 - p.rho ** 2 * u_here)


def chapman_kolmogorov_check(
    p: JacobiParams,
    t: float,
    s: float,
    x: float,
    y: float,
    cfg: QuadratureConfig,
) -> tuple[float, float]:
    """(p_{t+s}(x,y), int p_t(x,z) p_s(z,y) A(z) dz), both by quadrature."""
    if t <= 0 or s <= 0:
        raise ValueError("t and s must be positive")
    lhs = heat_kernel(p, t + s, x, y, cfg)
    grid = SpectralGrid(p, cfg, t_min=min(t, s))
    mt, mtc = grid.multiplier(t)
    ms, msc = grid.multiplier(s)

    def integrand(zs: np.ndarray) -> np.ndarray:
        rows = np.array(
            [
                grid.pair_integral(mt, mtc, float(x), float(z))[0]
                * grid.pair_integral(ms, msc, float(z), float(y))[0]
                for z in zs
            ]
        )
        return rows * weight_A(p, zs)

    decay = kernel_support(p, max(t, s), max(abs(x), abs(y)), cfg)
    res = integrate_line(integrand, decay, cfg)
    if not res.converged:
        warnings.warn(f"Chapman-Kolmogorov z-integral: {res.reason}")
    return lhs, float(np.real(res.value))


def kernel_mass(p: JacobiParams, t: float, x: float, cfg: QuadratureConfig,
                grid: Optional[SpectralGrid] = None) -> float:
    """int p_t(x, y) A(y) dy; equals 1 for every x and t.

    The integration stops at the noise horizon even when the analytic
    support reaches further; a warning estimates the missed tail in that
    case (large rho with large t pushes real mass past the horizon).
    """
    grid = grid or SpectralGrid(p, cfg, t_min=t)
    m, mc = grid.multiplier(t)

    def integrand(ys: np.ndarray) -> np.ndarray:
        kern = np.array([grid.pair_integral(m, mc, float(x), float(yy))[0] for yy in ys])
        return kern * weight_A(p, ys)

    support = kernel_support(p, t, x, cfg).radius
    horizon = noise_horizon(p)
    if horizon < support:
        sd = math.sqrt(t)
        sigmas = (horizon - abs(x) - p.rho * t) / sd
        tail = math.erfc(sigmas / math.sqrt(2.0)) if sigmas > 0 else 1.0
        if tail > 10.0 * cfg.abs_tol:
            warnings.warn(
                f"kernel mass truncated at the noise horizon y={horizon:.2f}; "
                f"missed tail is about {tail:.2e}"
            )
    res = integrate_line(integrand, SupportRadius(min(support, horizon)), cfg)
    if not res.converged:
        warnings.warn(f"kernel mass quadrature: {res.reason}")
    return float(np.real(res.value))


def weighted_kernel_mass(p: JacobiParams, t: float, x: float, cfg: QuadratureConfig,
                         grid: Optional[SpectralGrid] = None) -> float:
    """int p_t(x, y) G_0(y) A(y) dy; equals exp(-t rho^2/2) G_0(x)."""
    grid = grid or SpectralGrid(p, cfg, t_min=t)
    m, mc = grid.multiplier(t)

    def integrand(ys: np.ndarray) -> np.ndarray:
        kern = np.array([grid.pair_integral(m, mc, float(x), float(yy))[0] for yy in ys])
        g0 = np.real(eigenfunction_G(p, 0.0, ys))
        return kern * g0 * weight_A(p, ys)

    res = integrate_line(integrand, kernel_support(p, t, x, cfg), cfg)
    if not res.converged:
        warnings.warn(f"weighted kernel mass quadrature: {res.reason}")
    return float(np.real(res.value))
