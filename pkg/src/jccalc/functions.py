"""Function containers shared by the transform, heat, and Green modules.

A SampledFunction is the common currency of every integral operator here:
values on a strictly increasing grid, an off-grid evaluation rule (either
a backing callback or a cubic interpolant with decay-hint extrapolation),
and a decay hint describing its tail so that line integrals can pick a
truncation radius.  A SpectralFunction carries transform values on a
lambda grid together with the parameter pair.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .params import JacobiParams
from .quadrature import Decay, ExponentialDecay, GaussianDecay, SupportRadius

__all__ = [
    "SchwartzDecay",
    "DecayHint",
    "SampledFunction",
    "SpectralFunction",
    "from_callback",
    "from_grid",
]


@dataclass(frozen=True)
class SchwartzDecay:
    """Tail hint for functions in the (cosh x)^(-rho/r)-weighted Schwartz class."""

    r: float

    def __post_init__(self) -> None:
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"Schwartz index r must lie in (0, 1], got {self.r}")


DecayHint = Union[SchwartzDecay, GaussianDecay, ExponentialDecay, SupportRadius]


def integrand_decay(hint: DecayHint, p: JacobiParams) -> Decay:
    """Decay descriptor for f(x) G_lam(-x) A(x) given f's own tail hint.

    |G_lam(-x)| A(x) grows like (1+|x|) e^(rho |x|).  A Schwartz-r hint
    leaves net exponential decay of rate rho (1/r - 1) plus at least one
    superexponential order from the Schwartz factor, hence the +1; tail
    probing at integration time validates the estimate.
    """
    if isinstance(hint, SchwartzDecay):
        return ExponentialDecay(p.rho * (1.0 / hint.r - 1.0) + 1.0)
    if isinstance(hint, GaussianDecay):
        return GaussianDecay(hint.t, drift=hint.drift + p.rho)
    if isinstance(hint, ExponentialDecay):
        if hint.rate <= p.rho:
            raise ValueError(
                f"exponential decay rate {hint.rate} does not beat the weight "
                f"growth rho={p.rho}; the transform integrand would not decay"
            )
        return ExponentialDecay(hint.rate - p.rho)
    return hint


@dataclass
class SampledFunction:
    """Function known on a strictly increasing grid, with tail metadata.

    Off-grid evaluation uses the backing callback when available, else a
    cubic spline inside the grid and zero outside (the decay hint promises
    negligible tails there).
    """

    grid: np.ndarray
    values: np.ndarray
    decay: DecayHint
    callback: Optional[Callable[[np.ndarray], np.ndarray]] = None
    spectral: Optional[Callable[[np.ndarray], np.ndarray]] = None
    _spline: Optional[CubicSpline] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values)
        if self.grid.ndim != 1 or self.grid.size < 1:
            raise ValueError("grid must be a nonempty 1-d array")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.values.shape != self.grid.shape:
            raise ValueError("values must match the grid shape")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if self.callback is not None:
            out = np.asarray(self.callback(x))
        else:
            if self._spline is None:
                self._spline = CubicSpline(self.grid, self.values)
            inside = (x >= self.grid[0]) & (x <= self.grid[-1])
            out = np.zeros(x.shape, dtype=complex if np.iscomplexobj(self.values) else float)
            out[inside] = self._spline(x[inside])
        return out[0] if scalar else out

    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["x", "re", "im"])
        vals = np.asarray(self.values, dtype=complex)
        for x, v in zip(self.grid, vals):
            writer.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str, decay: DecayHint) -> "SampledFunction":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][0].strip() != "x":
            raise ValueError("expected a header row starting with 'x'")
        xs, vs = [], []
        for row in rows[1:]:
            if not row:
                continue
            xs.append(float(row[0]))
            re = float(row[1])
            im = float(row[2]) if len(row) > 2 and row[2] != "" else 0.0
            vs.append(re + 1j * im)
        values = np.asarray(vs)
        if np.all(values.imag == 0):
            values = values.real
        return SampledFunction(np.asarray(xs), values, decay)


@dataclass
class SpectralFunction:
    """Transform values on a lambda grid, cubic-interpolated off grid."""

    lambdas: np.ndarray
    values: np.ndarray
    params: JacobiParams
    errors: Optional[np.ndarray] = None
    _spline: Optional[CubicSpline] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambda grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectral values must be finite")

    def __call__(self, lams) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        if self._spline is None:
            self._spline = CubicSpline(self.lambdas, self.values)
        inside = (lams >= self.lambdas[0]) & (lams <= self.lambdas[-1])
        out = np.zeros(lams.shape, dtype=complex)
        out[inside] = self._spline(lams[inside])
        return out

    def to_json(self) -> str:
        payload = {
            "params": {"alpha": self.params.alpha, "beta": self.params.beta},
            "lambdas": [float(v) for v in self.lambdas],
            "re": [float(v) for v in self.values.real],
            "im": [float(v) for v in self.values.imag],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "SpectralFunction":
        payload = json.loads(text)
        params = JacobiParams(payload["params"]["alpha"], payload["params"]["beta"])
        values = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(payload["im"], dtype=float)
        return SpectralFunction(np.asarray(payload["lambdas"], dtype=float), values, params)


def from_callback(
    f: Callable[[np.ndarray], np.ndarray],
    decay: DecayHint,
    grid: Optional[Sequence[float]] = None,
    spectral: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SampledFunction:
    """Wrap an analytic callback as a SampledFunction (grid kept for display)."""
    g = np.linspace(-8.0, 8.0, 161) if grid is None else np.asarray(grid, dtype=float)
    return SampledFunction(g, np.asarray(f(g)), decay, callback=f, spectral=spectral)


def from_grid(grid: Sequence[float], values: Sequence[float], decay: DecayHint) -> SampledFunction:
    return SampledFunction(np.asarray(grid, dtype=float), np.asarray(values), decay)
