"""Reproducing-kernel structure of the heat-semigroup image space.

The image of the weighted L^2 space under P_t carries the transferred
inner product <P_t f, P_t g> := <f, g>.  Point evaluation at u is
represented by the kernel section whose preimage is the kernel slice
y -> p_t(-u, -y) (= p_t(u, y) by the kernel symmetries), so

    F(u) = <f, p_t(-u, -.)>        for F = P_t f,
    K_t(z, u) = P_t(p_t(-u, -.))(z) = p_{2t}(z, u),

and Gram matrices of K_t are positive semidefinite by construction.

kernel_K below evaluates the reflected-argument spectral integral

    int exp(-t(lam^2+rho^2)) G_lam(-z) G_lam(-u) s(lam) dlam = p_{2t}(-z, u),

a symmetric quantity in its own right (it is the true kernel with one
argument reflected).  It is NOT positive semidefinite as a kernel - the
reflection flips the sign of the odd-odd part of the spectral expansion -
so positivity checks must use the unreflected reproducing kernel, exposed
as reproducing_kernel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .functions import SampledFunction
from .heat import heat_kernel
from .params import JacobiParams
from .quadrature import GaussianDecay, QuadratureConfig, integrate_line
from .spectral import SpectralGrid
from .specfun import weight_A

__all__ = [
    "ImageFunction",
    "kernel_K",
    "reproducing_kernel",
    "image_inner",
    "gram_matrix",
    "kernel_section_preimage",
]


@dataclass
class ImageFunction:
    """Element F = P_t f of the image space, carried by its preimage f."""

    preimage: SampledFunction
    t: float
    params: JacobiParams

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise ValueError("t must be positive")


def kernel_K(p: JacobiParams, t: float, z: float, u: float, cfg: QuadratureConfig) -> float:
    """Reflected-argument kernel p_{2t}(-z, u), via the squared multiplier."""
    if t <= 0:
        raise ValueError("t must be positive")
    return heat_kernel(p, 2.0 * t, -float(z), float(u), cfg)


def reproducing_kernel(
    p: JacobiParams,
    t: float,
    z: float,
    u: float,
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> float:
    """The reproducing kernel of the image space: p_{2t}(z, u)."""
    if t <= 0:
        raise ValueError("t must be positive")
    if grid is not None:
        m, mc = grid.multiplier(2.0 * t)
        return grid.pair_integral(m, mc, float(z), float(u))[0]
    return heat_kernel(p, 2.0 * t, float(z), float(u), cfg)


def kernel_section_preimage(
    p: JacobiParams,
    t: float,
    u: float,
    cfg: QuadratureConfig,
    grid: Optional[SpectralGrid] = None,
) -> SampledFunction:
    """Preimage of the evaluation functional at u: y -> p_t(-u, -y)."""
    grid = grid or SpectralGrid(p, cfg, t_min=t)
    m, mc = grid.multiplier(t)

    def section(ys: np.ndarray) -> np.ndarray:
        ys = np.atleast_1d(np.asarray(ys, dtype=float))
        return np.array([grid.pair_integral(m, mc, -float(u), -float(y))[0] for y in ys])

    probe = np.linspace(-6, 6, 25)
    return SampledFunction(probe, section(probe), GaussianDecay(t, drift=abs(u)), callback=section)


def image_inner(
    p: JacobiParams,
    t: float,
    F: ImageFunction,
    G: ImageFunction,
    cfg: QuadratureConfig,
) -> float:
    """Transferred inner product <F, G> = <f, g> in L^2(A)."""
    if F.t != t or G.t != t:
        raise ValueError("image functions must share the semigroup time")
    if F.params != p or G.params != p:
        raise ValueError("image functions must share the parameter pair")
    f, g = F.preimage, G.preimage

    def integrand(xs: np.ndarray) -> np.ndarray:
        return np.real(np.asarray(f(xs)) * np.conj(np.asarray(g(xs)))) * weight_A(p, xs)

    from .functions import integrand_decay

    res = integrate_line(integrand, integrand_decay(f.decay, p), cfg)
    if not res.converged:
        warnings.warn(f"image inner product quadrature: {res.reason}")
    return float(np.real(res.value))


def gram_matrix(
    p: JacobiParams,
    t: float,
    us: Sequence[float],
    cfg: QuadratureConfig,
) -> np.ndarray:
    """Gram matrix of the reproducing kernel on the given nodes (PSD)."""
    us = np.asarray(us, dtype=float)
    if np.unique(us).size != us.size:
        raise ValueError("gram nodes must be distinct")
    grid = SpectralGrid(p, cfg, t_min=2.0 * t)
    m, mc = grid.multiplier(2.0 * t)
    n = us.size
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            val = grid.pair_integral(m, mc, float(us[i]), float(us[j]))[0]
            out[i, j] = val
            out[j, i] = val
    return out
