"""The first-order operator T, its square, and the associated Laplacian.

    T f(x)  = f'(x) + [(2a+1) coth x + (2b+1) tanh x] (f(x) - f(-x))/2
              - rho f(-x)
    T^2 f   = f'' + (A'/A)'(x) Mf(x) + (A'/A)(x) f'(x) + rho^2 f(x)

with Mf(x) = (f(x) - f(-x))/2.  Near x = 0 the two singular terms of T^2
cancel against the odd part of f; they are evaluated by series below a
switch radius.  Derivatives come from user callbacks when present and from
Richardson-extrapolated central differences otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

import numpy as np

from .params import JacobiParams
from .specfun import dlog_deriv_A, log_deriv_A

__all__ = [
    "EvaluableFunction",
    "apply_T",
    "apply_T2",
    "laplacian",
    "check_condition_c2rho",
    "transform_of_T2",
]

# Below this |x| the singular part of T^2 is assembled by series.
X_SWITCH = 1e-3
_EPS = np.finfo(float).eps


@dataclass
class EvaluableFunction:
    """Callback-backed function with optional derivative callbacks.

    All callbacks are array-aware (ndarray in, ndarray out).  Missing
    derivatives are replaced by central finite differences with one
    Richardson extrapolation level.
    """

    func: Callable[[np.ndarray], np.ndarray]
    d1: Optional[Callable[[np.ndarray], np.ndarray]] = None
    d2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    d3: Optional[Callable[[np.ndarray], np.ndarray]] = None
    parity: Literal["even", "odd", "none"] = "none"
    allow_fd: bool = True

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)))

    def reflected(self, x):
        x = np.asarray(x, dtype=float)
        if self.parity == "even":
            return self(x)
        if self.parity == "odd":
            return -self(x)
        return self(-x)

    def _fd_step(self, x, order: int) -> np.ndarray:
        # h ~ eps^(1/3) for first, eps^(1/4) for second, eps^(1/5) for third
        # derivatives: balances truncation against rounding.
        expo = {1: 1.0 / 3.0, 2: 0.25, 3: 0.2}[order]
        return _EPS ** expo * (1.0 + np.abs(x))

    def deriv1(self, x):
        x = np.asarray(x, dtype=float)
        if self.d1 is not None:
            return np.asarray(self.d1(x))
        if not self.allow_fd:
            raise ValueError("derivative unavailable and finite differencing disabled")
        h = self._fd_step(x, 1)

        def central(h):
            return (self(x + h) - self(x - h)) / (2.0 * h)

        return (4.0 * central(h / 2.0) - central(h)) / 3.0

    def deriv2(self, x):
        x = np.asarray(x, dtype=float)
        if self.d2 is not None:
            return np.asarray(self.d2(x))
        if not self.allow_fd:
            raise ValueError("derivative unavailable and finite differencing disabled")
        h = self._fd_step(x, 2)

        def central(h):
            return (self(x + h) - 2.0 * self(x) + self(x - h)) / (h * h)

        return (4.0 * central(h / 2.0) - central(h)) / 3.0

    def deriv3(self, x):
        x = np.asarray(x, dtype=float)
        if self.d3 is not None:
            return np.asarray(self.d3(x))
        if not self.allow_fd:
            raise ValueError("derivative unavailable and finite differencing disabled")
        h = self._fd_step(x, 3)

        def central(h):
            return (self(x + 2 * h) - 2.0 * self(x + h) + 2.0 * self(x - h) - self(x - 2 * h)) / (2.0 * h ** 3)

        return (4.0 * central(h / 2.0) - central(h)) / 3.0


def _as_evaluable(f) -> EvaluableFunction:
    if isinstance(f, EvaluableFunction):
        return f
    return EvaluableFunction(f)


def _odd_part(f: EvaluableFunction, x):
    if f.parity == "even":
        return np.zeros_like(np.asarray(x, dtype=float))
    return (f(x) - f.reflected(x)) / 2.0


def apply_T(p: JacobiParams, f, x) -> Union[complex, np.ndarray, float]:
    """First-order operator T applied to f at x (array-aware).

    At |x| < X_SWITCH the coth-singular term is evaluated through the
    series x coth x = 1 + x^2/3 + O(x^4) against Mf(x)/x = f'(0) +
    f'''(0) x^2 / 6 + O(x^4); the tanh term contributes at O(x^2).
    """
    f = _as_evaluable(f)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x1 = np.atleast_1d(x)
    out = np.empty(x1.shape, dtype=complex)

    small = np.abs(x1) < X_SWITCH
    large = ~small
    if np.any(large):
        xs = x1[large]
        out[large] = (
            f.deriv1(xs)
            + log_deriv_A(p, xs) * _odd_part(f, xs)
            - p.rho * f.reflected(xs)
        )
    if np.any(small):
        xs = x1[small]
        d1_0 = f.deriv1(np.zeros_like(xs))
        d3_0 = f.deriv3(np.zeros_like(xs))
        m_over_x = d1_0 + d3_0 * xs ** 2 / 6.0
        x_coth = 1.0 + xs ** 2 / 3.0
        sing = (2.0 * p.alpha + 1.0) * x_coth * m_over_x \
            + (2.0 * p.beta + 1.0) * xs ** 2 * m_over_x
        out[small] = f.deriv1(xs) + sing - p.rho * f.reflected(xs)

    if not np.iscomplexobj(f(x1[:1])):
        out = out.real
    return out[0] if scalar else out


def apply_T2(p: JacobiParams, f, x) -> Union[complex, np.ndarray, float]:
    """Second-order form f'' + (A'/A)' Mf + (A'/A) f' + rho^2 f.

    Near zero the 1/x^2 and 1/x singularities cancel against the odd part
    of f; the limit is assembled to O(x^2):

        (2a+1)[coth x f' - Mf/sinh^2 x] = (2a+1)[f''(0)
            + x (f'''(0)/3 + 2 f'(0)/3)] + O(x^2)
        (2b+1)[tanh x f' + Mf/cosh^2 x] = (2b+1) 2 f'(0) x + O(x^2).
    """
    f = _as_evaluable(f)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x1 = np.atleast_1d(x)
    out = np.empty(x1.shape, dtype=complex)

    small = np.abs(x1) < X_SWITCH
    large = ~small
    if np.any(large):
        xs = x1[large]
        out[large] = (
            f.deriv2(xs)
            + dlog_deriv_A(p, xs) * _odd_part(f, xs)
            + log_deriv_A(p, xs) * f.deriv1(xs)
            + p.rho ** 2 * f(xs)
        )
    if np.any(small):
        xs = x1[small]
        z = np.zeros_like(xs)
        d1_0, d2_0, d3_0 = f.deriv1(z), f.deriv2(z), f.deriv3(z)
        sing = (2.0 * p.alpha + 1.0) * (d2_0 + xs * (d3_0 / 3.0 + 2.0 * d1_0 / 3.0)) \
            + (2.0 * p.beta + 1.0) * 2.0 * d1_0 * xs
        out[small] = f.deriv2(xs) + sing + p.rho ** 2 * f(xs)

    if not np.iscomplexobj(f(x1[:1])):
        out = out.real
    return out[0] if scalar else out


def laplacian(p: JacobiParams, f, x):
    """Modified Laplacian (T^2 - rho^2)/2."""
    f = _as_evaluable(f)
    return 0.5 * (apply_T2(p, f, x) - p.rho ** 2 * f(np.asarray(x, dtype=float)))


def check_condition_c2rho(p: JacobiParams, f, x0: float) -> bool:
    """Membership test for the dispersive class: f'' <= 0 implies f'' + rho^2 f <= 0."""
    f = _as_evaluable(f)
    d2 = float(np.real(f.deriv2(np.asarray(float(x0)))))
    if d2 > 0.0:
        return True
    return d2 + p.rho ** 2 * float(np.real(f(np.asarray(float(x0))))) <= 0.0


def transform_of_T2(p: JacobiParams, f, lam, cfg, decay) -> np.ndarray:
    """Forward transform of T^2 f at the given lambdas (by quadrature)."""
    from .transform import forward_values

    f = _as_evaluable(f)
    return forward_values(p, lambda xs: apply_T2(p, f, xs), lam, cfg, decay)
