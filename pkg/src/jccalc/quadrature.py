"""Adaptive Gauss-Legendre quadrature on finite intervals and on the line.

The engine integrates array-aware integrands: a callback receives a node
array of shape (n,) and returns values of shape (n,) or (k, n) for
vector-valued integrals (one adaptive refinement shared by all k
components).  Panels carry an embedded error estimate, the difference
between the order-p and order-p/2 Gauss rules, and refinement always
bisects the panel with the largest estimate, so results are deterministic
for a fixed configuration.

Integrals over the whole line are truncated to [-R, R] with R chosen from
a decay descriptor and then verified by probing the outermost panels until
their contribution is negligible.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "QuadratureError",
    "GaussianDecay",
    "ExponentialDecay",
    "SupportRadius",
    "integrate_finite",
    "integrate_line",
]

# Fixed step used when growing the truncation radius during tail probing.
_TAIL_STEP = 2.0
# Hard cap on live panels; stops refinement from chasing rounding noise.
_MAX_PANELS = 4000
# Safety inflation applied to decay-derived radii.
_RADIUS_SAFETY = 1.5
# Additive guard absorbing polynomial growth of spectral densities.
_RADIUS_GUARD = 4.0


class QuadratureError(RuntimeError):
    """Raised for non-finite integrand values or invalid configurations."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_depth: int = 14
    max_radius: float = 60.0
    panel_order: int = 16

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.max_radius <= 0:
            raise ValueError("max_radius must be positive")
        if self.panel_order < 2 or self.panel_order % 2 != 0:
            # Even order keeps nodes away from panel midpoints (e.g. lambda=0).
            raise ValueError("panel_order must be an even integer >= 2")


@dataclass
class IntegralResult:
    value: Union[complex, np.ndarray]
    error_estimate: float
    truncation_radius: float
    converged: bool
    reason: str = ""

    def tolerance(self, cfg: QuadratureConfig) -> float:
        scale = float(np.max(np.abs(self.value))) if np.ndim(self.value) else abs(self.value)
        return max(cfg.abs_tol, cfg.rel_tol * scale)


@dataclass(frozen=True)
class GaussianDecay:
    """Integrand bounded by poly * exp(-t (|x| - drift/t)^2 / 2)-type tails."""

    t: float
    drift: float = 0.0

    def truncation_radius(self, abs_tol: float) -> float:
        base = math.sqrt(2.0 * math.log(1.0 / abs_tol) / self.t)
        return _RADIUS_SAFETY * (base + abs(self.drift) / self.t) + _RADIUS_GUARD


@dataclass(frozen=True)
class ExponentialDecay:
    """Integrand bounded by poly * exp(-rate |x|) tails."""

    rate: float

    def truncation_radius(self, abs_tol: float) -> float:
        return _RADIUS_SAFETY * math.log(1.0 / abs_tol) / self.rate + _RADIUS_GUARD


@dataclass(frozen=True)
class SupportRadius:
    """Integrand known to vanish (or be negligible) outside [-radius, radius]."""

    radius: float

    def truncation_radius(self, abs_tol: float) -> float:
        return self.radius


Decay = Union[GaussianDecay, ExponentialDecay, SupportRadius]

_rule_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _rule_cache:
        _rule_cache[order] = leggauss(order)
    return _rule_cache[order]


@dataclass
class _Panel:
    a: float
    b: float
    depth: int
    value: np.ndarray = field(default=None)  # type: ignore[assignment]
    error: float = 0.0


def _eval_panel(f: Callable[[np.ndarray], np.ndarray], panel: _Panel, order: int) -> None:
    xs, ws = _rule(order)
    xs_half, ws_half = _rule(order // 2)
    mid = 0.5 * (panel.a + panel.b)
    half = 0.5 * (panel.b - panel.a)
    nodes = mid + half * xs
    vals = np.asarray(f(nodes))
    if not np.all(np.isfinite(vals)):
        bad = nodes[np.argwhere(~np.all(np.isfinite(np.atleast_2d(vals)), axis=0)).ravel()[0]]
        raise QuadratureError(f"non-finite integrand value at node x={bad!r}")
    panel.value = half * vals @ ws
    coarse = half * np.asarray(f(mid + half * xs_half)) @ ws_half
    panel.error = float(np.max(np.abs(panel.value - coarse)))


def integrate_finite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig,
    *,
    initial_panels: int = 1,
    _radius: float = 0.0,
) -> IntegralResult:
    """Adaptive integral of f over [a, b].

    The panel with the largest embedded error estimate is bisected until
    the summed estimate meets max(abs_tol, rel_tol * |value|) or every
    offending panel has reached max_depth (converged=False in that case).
    """
    if not a < b:
        raise ValueError(f"require a < b, got [{a}, {b}]")
    edges = np.linspace(a, b, max(1, initial_panels) + 1)
    panels = [_Panel(edges[i], edges[i + 1], 0) for i in range(len(edges) - 1)]
    for p in panels:
        _eval_panel(f, p, cfg.panel_order)

    heap: list[tuple[float, int, _Panel]] = []
    counter = 0
    for p in panels:
        heapq.heappush(heap, (-p.error, counter, p))
        counter += 1
    done: list[_Panel] = []
    exhausted = False

    def totals(extra: list[_Panel]) -> tuple[np.ndarray, float]:
        allp = done + extra
        val = sum(p.value for p in allp)
        err = sum(p.error for p in allp)
        return np.asarray(val), err

    while heap:
        live = [item[2] for item in heap]
        value, err = totals(live)
        scale = float(np.max(np.abs(value)))
        if err <= max(cfg.abs_tol, cfg.rel_tol * scale):
            break
        if len(heap) + len(done) >= _MAX_PANELS:
            exhausted = True
            break
        _, _, worst = heapq.heappop(heap)
        if worst.depth >= cfg.max_depth:
            exhausted = True
            done.append(worst)
            continue
        mid = 0.5 * (worst.a + worst.b)
        for child in (_Panel(worst.a, mid, worst.depth + 1), _Panel(mid, worst.b, worst.depth + 1)):
            _eval_panel(f, child, cfg.panel_order)
            heapq.heappush(heap, (-child.error, counter, child))
            counter += 1

    live = [item[2] for item in heap]
    ordered = sorted(done + live, key=lambda p: p.a)
    value = np.asarray(sum(p.value for p in ordered))
    err = float(sum(p.error for p in ordered))
    scale = float(np.max(np.abs(value)))
    converged = err <= max(cfg.abs_tol, cfg.rel_tol * scale)
    reason = "" if converged else ("depth-exhausted" if exhausted else "tolerance-not-met")
    if value.ndim == 0:
        value = complex(value)
    return IntegralResult(value, err, _radius, converged, reason)


def _tail_contribution(f, lo: float, hi: float, order: int) -> float:
    panel = _Panel(lo, hi, 0)
    _eval_panel(f, panel, order)
    return float(np.max(np.abs(panel.value)))


def integrate_line(
    f: Callable[[np.ndarray], np.ndarray],
    decay: Decay,
    cfg: QuadratureConfig,
) -> IntegralResult:
    """Integral of f over the real line via decay-derived symmetric truncation.

    The initial radius comes from the decay descriptor; it is then grown in
    fixed steps until the outermost panel on each side contributes less
    than abs_tol/4, or max_radius is hit (converged=False with reason
    "truncation-not-converged" in that case).
    """
    if isinstance(decay, SupportRadius):
        radius = min(decay.truncation_radius(cfg.abs_tol), cfg.max_radius)
        truncation_ok = True
    else:
        radius = min(decay.truncation_radius(cfg.abs_tol), cfg.max_radius)
        truncation_ok = False
        while True:
            tail = max(
                _tail_contribution(f, radius, radius + _TAIL_STEP, cfg.panel_order),
                _tail_contribution(f, -radius - _TAIL_STEP, -radius, cfg.panel_order),
            )
            if tail < cfg.abs_tol / 4.0:
                truncation_ok = True
                break
            if radius >= cfg.max_radius:
                break
            radius = min(radius + _TAIL_STEP, cfg.max_radius)

    n_init = max(8, int(math.ceil(2.0 * radius / 2.0)))
    result = integrate_finite(f, -radius, radius, cfg, initial_panels=n_init, _radius=radius)
    if not truncation_ok:
        result.converged = False
        result.reason = "truncation-not-converged"
    return result
