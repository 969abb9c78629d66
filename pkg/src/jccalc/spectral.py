"""Shared fixed-grid spectral integrator with eigenfunction caching.

Kernel fields, transition tables, convolutions, and semigroup applications
all integrate products of eigenfunctions against the spectral density over
the same lambda range.  The dominant cost is the hypergeometric evaluation
G_lam(x), which depends only on x once the lambda nodes are fixed, so this
module pins a composite Gauss-Legendre grid and memoizes G per argument.
Every integral reports an embedded error estimate from a lower-order
companion rule on the same panels.

The adaptive engine in jccalc.quadrature remains the reference for one-off
values; this grid is the bulk path.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .params import JacobiParams
from .quadrature import GaussianDecay, QuadratureConfig
from .specfun import eigenfunction_G, plancherel_density

__all__ = ["SpectralGrid"]

_PANEL_WIDTH = 1.0
_COMPANION_ORDER = 12


class SpectralGrid:
    """Composite Gauss-Legendre grid over [-T, T] in the spectral variable.

    T is derived from the Gaussian decay of the smallest heat time the grid
    will serve.  G-values are cached per spatial argument across both the
    main rule and the companion rule used for error estimates.
    """

    def __init__(
        self,
        params: JacobiParams,
        cfg: QuadratureConfig,
        t_min: float,
        radius: Optional[float] = None,
    ):
        if t_min <= 0 and radius is None:
            raise ValueError("need a positive t_min or an explicit radius")
        self.params = params
        self.cfg = cfg
        T = radius if radius is not None else GaussianDecay(t_min).truncation_radius(cfg.abs_tol)
        T = min(T, cfg.max_radius)
        self.radius = T
        n_panels = max(8, int(math.ceil(2.0 * T / _PANEL_WIDTH)))
        edges = np.linspace(-T, T, n_panels + 1)
        self.nodes, self.weights = self._composite(edges, cfg.panel_order)
        self.nodes_c, self.weights_c = self._composite(edges, _COMPANION_ORDER)
        self.dens = plancherel_density(params, self.nodes)
        self.dens_c = plancherel_density(params, self.nodes_c)
        self._cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    @staticmethod
    def _composite(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
        xs, ws = leggauss(order)
        mids = 0.5 * (edges[:-1] + edges[1:])
        halves = 0.5 * np.diff(edges)
        nodes = (mids[:, None] + halves[:, None] * xs[None, :]).ravel()
        weights = (halves[:, None] * ws[None, :]).ravel()
        return nodes, weights

    def eig(self, x: float) -> tuple[np.ndarray, np.ndarray]:
        """G_lam(x) on the main and companion node sets, memoized."""
        key = float(x)
        hit = self._cache.get(key)
        if hit is None:
            hit = (
                eigenfunction_G(self.params, self.nodes, key),
                eigenfunction_G(self.params, self.nodes_c, key),
            )
            self._cache[key] = hit
        return hit

    def multiplier(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        r2 = self.params.rho ** 2
        return (
            np.exp(-0.5 * t * (self.nodes ** 2 + r2)),
            np.exp(-0.5 * t * (self.nodes_c ** 2 + r2)),
        )

    def pair_integral(
        self,
        mult: np.ndarray,
        mult_c: np.ndarray,
        x: float,
        y: float,
    ) -> tuple[float, float]:
        """Real integral of mult(lam) G_lam(x) G_lam(-y) against the density.

        Returns (value, error_estimate); the imaginary residue is verified
        below 100 * abs_tol before being dropped.
        """
        gx, gx_c = self.eig(x)
        gy, gy_c = self.eig(-y)
        full = np.sum(mult * gx * gy * self.dens * self.weights)
        coarse = np.sum(mult_c * gx_c * gy_c * self.dens_c * self.weights_c)
        err = abs(full - coarse)
        if abs(full.imag) > 100.0 * self.cfg.abs_tol:
            raise ArithmeticError(
                f"kernel imaginary residue {full.imag:.3e} at (x={x}, y={y})"
            )
        return float(full.real), float(err)

    def kernel(self, t: float, x: float, y: float) -> tuple[float, float]:
        m, mc = self.multiplier(t)
        return self.pair_integral(m, mc, x, y)

    def apply(
        self,
        mult: np.ndarray,
        mult_c: np.ndarray,
        x: float,
    ) -> tuple[complex, float]:
        """Integral of mult(lam) G_lam(x) against the density (complex)."""
        gx, gx_c = self.eig(x)
        full = np.sum(mult * gx * self.dens * self.weights)
        coarse = np.sum(mult_c * gx_c * self.dens_c * self.weights_c)
        return complex(full), float(abs(full - coarse))

    def transform_on_grid(
        self,
        f_vals: Callable[[np.ndarray], np.ndarray],
        decay,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Forward-transform values of f on the main and companion nodes.

        One vector-valued adaptive line integral covers every node at once.
        """
        from .quadrature import integrate_line
        from .specfun import weight_A

        lams = np.concatenate([self.nodes, self.nodes_c])

        def integrand(xs: np.ndarray) -> np.ndarray:
            g = eigenfunction_G(self.params, lams[:, None], -xs[None, :])
            return g * (np.asarray(f_vals(xs)) * weight_A(self.params, xs))[None, :]

        res = integrate_line(integrand, decay, self.cfg)
        vals = np.asarray(res.value)
        if not res.converged:
            raise ArithmeticError(f"grid transform did not converge: {res.reason}")
        return vals[: self.nodes.size], vals[self.nodes.size:]
