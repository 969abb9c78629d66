"""Property batteries for every module, shared by `jc verify` and the tests.

Each suite runs a list of named checks and reports the measured error
against its tolerance.  Checks marked expected_defect=True probe identities
that hold in the rational (flat-weight) limit of this operator family but
provably fail for the hyperbolic weight itself: eigenfunction scale
homogeneity, the reflection rule for odd functions, the unit-free kernel
mass exp(-t rho^2 / 2) (the true mass is 1; the spectral-gap factor
appears in the G_0-weighted mass instead), the per-step killing rate
derived from it, and positive semidefiniteness of the reflected-argument
kernel.  A suite passes when every ordinary check passes and every
expected-defect check indeed fails, so a defect silently "healing" is
flagged as loudly as a regression.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import green as green_mod
from . import markov as markov_mod
from . import rkhs as rkhs_mod
from .functions import SampledFunction, from_callback, integrand_decay
from .heat import (
    chapman_kolmogorov_check,
    fill_heat_field,
    fundamental_solution,
    heat_kernel,
    heat_residual,
    kernel_mass,
    semigroup_apply,
    weighted_kernel_mass,
)
from .operators import EvaluableFunction, apply_T, apply_T2, check_condition_c2rho
from .params import JacobiParams
from .quadrature import ExponentialDecay, GaussianDecay, QuadratureConfig, SupportRadius, integrate_line
from .spectral import SpectralGrid
from .specfun import eigenfunction_G, gamma_complex, phi, plancherel_density, weight_A
from .transform import (
    forward_values,
    inverse_values,
    plancherel_check,
    plancherel_check_general,
    spectral_callback,
    translate,
)

__all__ = ["PropertyResult", "run_suite", "run_suites", "report_json", "SUITE_NAMES"]

CLASSICAL = JacobiParams(0.5, -0.5)
GENERIC = JacobiParams(1.3, 0.4)


@dataclass
class PropertyResult:
    name: str
    max_err: float
    tol: float
    passed: bool
    expected_defect: bool = False
    note: str = ""

    @property
    def ok(self) -> bool:
        """True when the outcome matches expectation (defects must fail)."""
        return self.passed != self.expected_defect


def _res(name, err, tol, *, defect=False, note="") -> PropertyResult:
    return PropertyResult(name, float(err), float(tol), bool(err <= tol), defect, note)


def _gauss_battery(p: JacobiParams) -> list[SampledFunction]:
    """Parity-pure Gaussian-type functions with exact derivative callbacks."""
    rho = p.rho

    def bat(expr, d1, d2, d3, decay):
        f = from_callback(expr, decay)
        f.d1, f.d2, f.d3 = d1, d2, d3  # type: ignore[attr-defined]
        return f

    e = np.exp
    out = [
        from_callback(lambda x: e(-x ** 2), GaussianDecay(2.0)),
        from_callback(lambda x: e(-0.5 * x ** 2), GaussianDecay(1.0)),
        from_callback(lambda x: x * e(-x ** 2), GaussianDecay(2.0)),
        from_callback(lambda x: e(-x ** 2) * np.cosh(x) ** (-rho), GaussianDecay(2.0)),
        from_callback(lambda x: e(-x ** 2) - 0.5 * e(-2.0 * x ** 2), GaussianDecay(2.0)),
    ]
    return out


def _smooth_evaluables() -> list[EvaluableFunction]:
    e = np.exp
    return [
        EvaluableFunction(
            lambda x: e(-x ** 2),
            d1=lambda x: -2 * x * e(-x ** 2),
            d2=lambda x: (4 * x ** 2 - 2) * e(-x ** 2),
            d3=lambda x: (12 * x - 8 * x ** 3) * e(-x ** 2),
            parity="even",
        ),
        EvaluableFunction(
            lambda x: x * e(-0.5 * x ** 2),
            d1=lambda x: (1 - x ** 2) * e(-0.5 * x ** 2),
            d2=lambda x: (x ** 3 - 3 * x) * e(-0.5 * x ** 2),
            d3=lambda x: (-x ** 4 + 6 * x ** 2 - 3) * e(-0.5 * x ** 2),
            parity="odd",
        ),
        EvaluableFunction(
            lambda x: e(-x ** 2) * np.cos(x),
            d1=lambda x: e(-x ** 2) * (-2 * x * np.cos(x) - np.sin(x)),
            d2=lambda x: e(-x ** 2) * ((4 * x ** 2 - 3) * np.cos(x) + 4 * x * np.sin(x)),
            d3=lambda x: e(-x ** 2) * ((18 * x - 8 * x ** 3) * np.cos(x) + (12 * x ** 2 - 7) * np.sin(x)),
            parity="even",
        ),
    ]


# ----------------------------------------------------------------- specfun


def _suite_specfun(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = []

    draws = []
    for _ in range(200):
        alpha = rng.uniform(-0.45, 2.5)
        beta = rng.uniform(-0.5, alpha)
        draws.append((JacobiParams(alpha, beta), rng.uniform(-8, 8)))
    err = max(abs(eigenfunction_G(p, lam, 0.0) - 1.0) for p, lam in draws)
    out.append(_res("eigenfunction-normalization-at-origin", err, 1e-12))

    lam_g, x_g = np.meshgrid(np.linspace(0.1, 3.0, 12), np.linspace(0.1, 3.0, 12))
    closed = np.sin(lam_g * x_g) / (lam_g * np.sinh(x_g))
    err = np.max(np.abs(phi(CLASSICAL, lam_g, x_g) - closed))
    out.append(_res("classical-closed-form-oracle", err, 1e-10))

    err = 0.0
    for p in (CLASSICAL, GENERIC):
        for lam in (0.3, 1.7, 6.0):
            for x in (-2.0, 0.4, 1.1):
                err = max(err, abs(eigenfunction_G(p, -lam, x) - np.conj(eigenfunction_G(p, lam, x))))
    out.append(_res("eigenfunction-conjugate-symmetry", err, 1e-12))

    worst = -np.inf
    for _ in range(120):
        alpha = rng.uniform(-0.45, 2.0)
        beta = rng.uniform(-0.5, alpha)
        p = JacobiParams(alpha, beta)
        lam, x = rng.uniform(-5, 5), rng.uniform(-4, 4)
        worst = max(worst, abs(eigenfunction_G(p, lam, x)) - eigenfunction_G(p, 0.0, x).real)
    out.append(_res("eigenfunction-domination-by-ground-state", max(worst, 0.0), 1e-12))

    xs = np.linspace(0.1, 10, 60)
    ratios = []
    for p in (CLASSICAL, GENERIC):
        for lam in (0.5, 2.0):
            g = np.abs(eigenfunction_G(p, lam, xs))
            ratios.append(np.max(g * np.exp(p.rho * xs) / (1 + xs)))
    out.append(_res("eigenfunction-exponential-decay-bound", max(ratios), 100.0,
                    note="bounded ratio |G| e^(rho x)/(1+x) on x <= 10"))

    err = abs(abs(gamma_complex(1j)) ** 2 - np.pi / np.sinh(np.pi))
    err = max(err, abs(gamma_complex(0.5) - np.sqrt(np.pi)))
    out.append(_res("gamma-reflection-oracle", err, 1e-12))

    lams = np.linspace(0.05, 8, 40)
    err = float(np.max(np.abs(plancherel_density(CLASSICAL, lams)
                              - (lams ** 2 + 1j * lams) / (2 * np.pi))))
    err = max(err, abs(plancherel_density(GENERIC, 0.0)))
    for p in (CLASSICAL, GENERIC):
        d = plancherel_density(p, lams)
        err = max(err, float(np.max(np.abs(plancherel_density(p, -lams) - np.conj(d)))))
        if np.min(d.real) <= 0:
            err = max(err, 1.0)
    out.append(_res("plancherel-density-symmetry-and-oracle", err, 1e-12))

    err = 0.0
    for _ in range(200):
        alpha = rng.uniform(-0.45, 2.0)
        beta = rng.uniform(-0.5, alpha)
        p = JacobiParams(alpha, beta)
        lam, x, tt = rng.uniform(-3, 3), rng.uniform(-2.5, 2.5), rng.uniform(-1.6, 1.6)
        err = max(err, abs(eigenfunction_G(p, lam, tt * x) - eigenfunction_G(p, lam * tt, x)))
    out.append(_res("eigenfunction-scale-homogeneity", err, 1e-9, defect=True,
                    note="true in the rational limit only; fails for the hyperbolic weight"))
    return out


# ----------------------------------------------------------------- operator


def _suite_operator(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    out = []
    xs = np.linspace(-3, 3, 81)

    err_t = err_t2 = 0.0
    for p in (CLASSICAL, GENERIC):
        for lam in (0.5, 1.0, 2.0):
            gf = EvaluableFunction(lambda v, p=p, lam=lam: eigenfunction_G(p, lam, v))
            gv = eigenfunction_G(p, lam, xs)
            tv = apply_T(p, gf, xs)
            t2v = apply_T2(p, gf, xs)
            err_t = max(err_t, np.max(np.abs(tv - 1j * lam * gv) / (1 + np.abs(gv))))
            err_t2 = max(err_t2, np.max(np.abs(t2v + lam ** 2 * gv) / (1 + np.abs(gv))))
    out.append(_res("first-order-eigen-relation", err_t, 1e-6))
    out.append(_res("second-order-eigen-relation", err_t2, 1e-5))

    # dispersive bumps peaked at the origin
    bumps = [
        EvaluableFunction(lambda x, s=s: np.exp(-(x / s) ** 2),
                          d1=lambda x, s=s: -2 * x / s ** 2 * np.exp(-(x / s) ** 2),
                          d2=lambda x, s=s: (4 * x ** 2 / s ** 4 - 2 / s ** 2) * np.exp(-(x / s) ** 2),
                          d3=lambda x, s=s: (12 * x / s ** 4 - 8 * x ** 3 / s ** 6) * np.exp(-(x / s) ** 2),
                          parity="even")
        for s in (0.6, 1.0, 1.7)
    ]
    worst = -np.inf
    for p in (CLASSICAL, GENERIC):
        for b in bumps:
            if check_condition_c2rho(p, b, 0.0):
                worst = max(worst, float(np.real(apply_T2(p, b, 0.0))))
    out.append(_res("maximum-principle-at-peak", max(worst, 0.0), 1e-10))

    comp_err = 0.0
    xs_c = np.linspace(0.25, 3.0, 12)
    for p in (CLASSICAL, GENERIC):
        for f in _smooth_evaluables():
            tf = EvaluableFunction(lambda v, p=p, f=f: apply_T(p, f, v))
            comp_err = max(comp_err, np.max(np.abs(
                np.asarray(apply_T(p, tf, xs_c)) - np.asarray(apply_T2(p, f, xs_c)))))
    out.append(_res("operator-composition-T-squared", comp_err, 1e-8))

    # the 0-vs-(+-1e-4) comparison is an identity only for even f (odd f has
    # T^2 f(0) = 0 and the difference measures the genuine slope); the seam
    # check below compares the series branch against the direct branch just
    # across the switch radius for every parity
    sing_err = 0.0
    for p in (CLASSICAL, GENERIC):
        for f in _smooth_evaluables():
            if f.parity == "even":
                v0 = complex(apply_T2(p, f, 0.0))
                for x in (1e-4, -1e-4):
                    vx = complex(apply_T2(p, f, x))
                    sing_err = max(sing_err, abs(vx - v0) / (1 + abs(v0)))
            lo = complex(apply_T2(p, f, 0.9995e-3))
            hi = complex(apply_T2(p, f, 1.0005e-3))
            sing_err = max(sing_err, abs(hi - lo) / (1 + abs(lo)))
    out.append(_res("singular-limit-consistency", sing_err, 1e-5))

    gauss = _smooth_evaluables()[0]
    cond_ok = (
        check_condition_c2rho(CLASSICAL, gauss, 0.0)
        and not check_condition_c2rho(CLASSICAL, EvaluableFunction(
            lambda x: np.ones_like(x), d1=lambda x: np.zeros_like(x),
            d2=lambda x: np.zeros_like(x), d3=lambda x: np.zeros_like(x)), 0.3)
        and check_condition_c2rho(CLASSICAL, EvaluableFunction(
            lambda x: x ** 2, d1=lambda x: 2 * x,
            d2=lambda x: 2 * np.ones_like(x), d3=lambda x: np.zeros_like(x)), 0.0)
    )
    out.append(_res("dispersive-class-membership-examples", 0.0 if cond_ok else 1.0, 0.5))

    lam_set = np.array([0.0, 0.5, 1.0, 2.0])
    rel = 0.0
    for p in (CLASSICAL, GENERIC):
        for f in _smooth_evaluables()[:2]:
            decay = GaussianDecay(1.0, drift=p.rho)
            hf = forward_values(p, f, lam_set, cfg, decay)
            ht2 = forward_values(p, lambda v: apply_T2(p, f, v), lam_set, cfg, decay)
            scale = np.max(np.abs(hf)) + 1.0
            rel = max(rel, float(np.max(np.abs(ht2 + lam_set ** 2 * hf) / scale)))
    out.append(_res("transform-diagonalizes-second-order", rel, 1e-5))
    return out


# ----------------------------------------------------------------- transform


def _suite_transform(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = []
    p = CLASSICAL
    battery = _gauss_battery(p)
    lam_grid = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])

    f1, f2 = battery[0], battery[2]
    a, b = rng.uniform(-2, 2, size=2)
    decay = integrand_decay(f1.decay, p)
    lin = from_callback(lambda x: a * f1(x) + b * f2(x), f1.decay)
    err = np.max(np.abs(
        forward_values(p, lin, lam_grid, cfg, decay)
        - a * forward_values(p, f1, lam_grid, cfg, decay)
        - b * forward_values(p, f2, lam_grid, cfg, decay)))
    out.append(_res("forward-linearity", err, 1e-9))

    xs = np.array([-1.5, -0.4, 0.0, 0.8, 2.0])
    err = 0.0
    for f in (battery[0], battery[2], battery[4]):
        hf = spectral_callback(p, f, cfg)
        rec = inverse_values(p, hf, xs, cfg, SupportRadius(30.0), real_output=True)
        err = max(err, float(np.max(np.abs(rec - np.real(f(xs))))))
    out.append(_res("inverse-of-forward-round-trip", err, 1e-5))

    rel = 0.0
    for f in battery:
        lhs, rhs = plancherel_check(p, f, cfg)
        rel = max(rel, abs(lhs - rhs) / abs(lhs))
    out.append(_res("norm-identity-parity-pure", rel, 1e-5))

    shifted = from_callback(lambda x: np.exp(-(x - 0.7) ** 2), GaussianDecay(2.0))
    lhs, rhs = plancherel_check_general(p, shifted, cfg)
    out.append(_res("norm-identity-reflected-form-general", abs(lhs - rhs) / abs(lhs), 1e-5))

    err = 0.0
    for f in (battery[0], battery[2]):
        hf = spectral_callback(p, f, cfg)
        vals = hf(lam_grid)
        err = max(err, float(np.max(np.abs(np.conj(hf(-lam_grid)) - vals))))
    out.append(_res("conjugate-reflection-for-real-functions", err, 1e-10))

    f = battery[0]  # even
    decay = integrand_decay(f.decay, p)
    hf = forward_values(p, f, lam_grid, cfg, decay)
    hcheck = forward_values(p, lambda x: np.asarray(f(-x)), -lam_grid, cfg, decay)
    out.append(_res("reflection-identity-even-functions",
                    float(np.max(np.abs(hcheck - hf))), 1e-8))

    fo = battery[2]  # odd
    hfo = forward_values(p, fo, lam_grid, cfg, decay)
    hco = forward_values(p, lambda x: np.asarray(fo(-x)), -lam_grid, cfg, decay)
    out.append(_res("reflection-identity-odd-functions",
                    float(np.max(np.abs(hco - hfo))), 1e-8, defect=True,
                    note="eigenfunctions are not reflection-homogeneous; odd part breaks the rule"))

    tau0 = translate(p, 0.0, battery[0], xs, cfg)
    out.append(_res("translation-at-zero-is-identity",
                    float(np.max(np.abs(tau0.values - battery[0](xs)))), 1e-6))
    return out


# ----------------------------------------------------------------- heat


def _suite_heat(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    out = []
    scan = np.linspace(-2, 2, 5)

    sym_err = pos_floor = 0.0
    min_val = np.inf
    for p, ts in ((CLASSICAL, (0.5, 1.0)), (GENERIC, (0.5,))):
        for t in ts:
            fld = fill_heat_field(p, t, scan, scan, cfg)
            vals = fld.values
            min_val = min(min_val, float(vals.min()))
            sym_err = max(sym_err, float(np.max(
                np.abs(vals - vals[::-1, ::-1].T) / (1 + np.abs(vals)))))
            sym_err = max(sym_err, float(np.max(np.abs(vals - vals.T) / (1 + np.abs(vals)))))
    out.append(_res("kernel-reflection-and-transpose-symmetry", sym_err, 1e-8))
    out.append(_res("kernel-strict-positivity", max(0.0, -min_val), 1e-10,
                    note=f"min kernel value {min_val:.3e}"))

    err = 0.0
    for p in (CLASSICAL, GENERIC):
        for (t, x) in ((0.5, 0.3), (1.0, -1.2)):
            err = max(err, abs(heat_kernel(p, t, x, 0.0, cfg) - fundamental_solution(p, t, x, cfg)))
    out.append(_res("kernel-at-zero-matches-fundamental-solution", err, 1e-9))

    err = 0.0
    for p in (CLASSICAL, GENERIC):
        t = 0.8
        lam_set = np.array([0.0, 0.5, 1.0, 2.0])
        fgrid = SpectralGrid(p, cfg, t_min=t)
        fm, fmc = fgrid.multiplier(t)

        def ft_vals(x, fgrid=fgrid, fm=fm, fmc=fmc):
            return np.array([fgrid.apply(fm, fmc, float(v))[0].real for v in np.atleast_1d(x)])

        ft = from_callback(ft_vals, GaussianDecay(t))
        hf = forward_values(p, ft, lam_set, cfg, GaussianDecay(t, drift=p.rho))
        target = np.exp(-0.5 * t * (lam_set ** 2 + p.rho ** 2))
        err = max(err, float(np.max(np.abs(hf - target))))
    out.append(_res("fundamental-solution-spectral-round-trip", err, 1e-7))

    err = 0.0
    for (p, t, x) in ((CLASSICAL, 0.5, 0.0), (CLASSICAL, 1.0, 0.5),
                      (CLASSICAL, 2.0, 1.0), (GENERIC, 0.5, 0.5)):
        err = max(err, abs(kernel_mass(p, t, x, cfg) - 1.0))
    out.append(_res("kernel-unit-mass", err, 1e-6,
                    note="the kernel family is conservative"))

    err = 0.0
    for p in (CLASSICAL, GENERIC):
        grid = SpectralGrid(p, cfg, t_min=0.5)
        for t in (0.5, 1.0, 2.0):
            for x in (0.0, 1.0):
                wm = weighted_kernel_mass(p, t, x, cfg, grid=grid)
                target = np.exp(-0.5 * t * p.rho ** 2) * eigenfunction_G(p, 0.0, x).real
                err = max(err, abs(wm - target))
    out.append(_res("ground-state-weighted-mass", err, 1e-6,
                    note="exp(-t rho^2/2) G_0(x): the spectral-gap mass identity"))

    p = CLASSICAL
    f = _gauss_battery(p)[0]
    xs = np.linspace(-1.5, 1.5, 7)
    t, s = 0.6, 0.4
    ps = semigroup_apply(p, s, f, np.linspace(-10, 10, 241), "spectral", cfg).output
    pts = semigroup_apply(p, t, ps, xs, "spectral", cfg).output.values
    direct = semigroup_apply(p, t + s, f, xs, "spectral", cfg).output.values
    out.append(_res("semigroup-law-on-grid", float(np.max(np.abs(pts - direct))), 1e-5))

    rel = 0.0
    for (t, s, x, y) in ((0.5, 0.5, 0.0, 0.0), (0.7, 0.4, 0.5, -0.8)):
        lhs, rhs = chapman_kolmogorov_check(p, t, s, x, y, cfg)
        rel = max(rel, abs(lhs - rhs) / abs(lhs))
    out.append(_res("chapman-kolmogorov-kernel-form", rel, 1e-4))

    rng = np.random.default_rng(seed)
    err = 0.0
    hf = spectral_callback(p, f, cfg)
    for _ in range(4):
        t = rng.uniform(0.3, 1.5)
        x = rng.uniform(-1.5, 1.5)
        y = rng.uniform(-1.5, 1.5)
        for mult in (
            lambda lams, tt: np.exp(-0.5 * tt * (lams ** 2 + p.rho ** 2)),
            lambda lams, tt, y=y: np.exp(-0.5 * tt * (lams ** 2 + p.rho ** 2)) * eigenfunction_G(p, lams, -y),
            lambda lams, tt: np.exp(-0.5 * tt * (lams ** 2 + p.rho ** 2)) * hf(lams),
        ):
            err = max(err, abs(heat_residual(p, t, x, mult, cfg)))
    out.append(_res("heat-equation-residual", err, 1e-4))

    g4 = from_callback(lambda x: np.exp(-x ** 2 / 4), GaussianDecay(0.5))
    sups = [float(np.max(np.abs(
        semigroup_apply(p, tt, g4, scan, "spectral", cfg).output.values - g4(scan))))
        for tt in (0.5, 0.1, 0.02)]
    mono = sups[0] > sups[1] > sups[2]
    out.append(_res("small-time-convergence-monotone", 0.0 if mono else 1.0, 0.5,
                    note=f"sup norms {sups}"))

    xs3 = np.array([-1.0, 0.0, 0.7])
    sa = semigroup_apply(p, 0.5, f, xs3, "spectral", cfg).output.values
    sc = semigroup_apply(p, 0.5, f, xs3, "convolution", cfg).output.values
    out.append(_res("semigroup-route-equivalence", float(np.max(np.abs(sa - sc))), 1e-6))

    W = 6.0
    wf = from_callback(lambda x: 0.5 * (np.tanh(2 * (W - x)) + np.tanh(2 * (W + x))),
                       ExponentialDecay(4.0))
    vals = semigroup_apply(p, 0.5, wf, scan, "convolution", cfg).output.values
    out.append(_res("sup-norm-bound-on-window", max(0.0, float(np.max(vals)) - 1.0), 1e-6))

    def l2norm(sf):
        r = integrate_line(lambda v: np.abs(np.asarray(sf(v))) ** 2 * weight_A(p, v),
                           integrand_decay(sf.decay, p), cfg)
        return float(np.sqrt(np.real(r.value)))

    worst_ratio = 0.0
    for fb in _gauss_battery(p)[:3]:
        n0 = l2norm(fb)
        pt = semigroup_apply(p, 0.5, fb, np.linspace(-10, 10, 241), "spectral", cfg).output
        worst_ratio = max(worst_ratio, l2norm(pt) / n0)
    out.append(_res("semigroup-l2-contraction", max(0.0, worst_ratio - 1.0), 1e-9,
                    note=f"worst norm ratio {worst_ratio:.6f}"))

    err = 0.0
    for (p2, t, x) in ((CLASSICAL, 1.0, 0.0), (CLASSICAL, 0.5, 1.0), (GENERIC, 1.0, 0.5)):
        err = max(err, abs(kernel_mass(p2, t, x, cfg) - np.exp(-0.5 * t * p2.rho ** 2)))
    out.append(_res("kernel-mass-spectral-gap-value", err, 1e-6, defect=True,
                    note="the unweighted mass is 1; exp(-t rho^2/2) shows up only against G_0"))
    return out


# ----------------------------------------------------------------- rkhs


def _suite_rkhs(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = []
    p = CLASSICAL
    t = 0.5

    err = 0.0
    for (z, u) in ((0.3, -0.7), (1.2, 0.4)):
        err = max(err, abs(rkhs_mod.kernel_K(p, t, z, u, cfg) - heat_kernel(p, 2 * t, -z, u, cfg)))
        err = max(err, abs(rkhs_mod.kernel_K(p, t, z, u, cfg) - rkhs_mod.kernel_K(p, t, u, z, cfg)))
    out.append(_res("reflected-kernel-route-consistency-and-symmetry", err, 1e-8))

    k00 = rkhs_mod.kernel_K(p, t, 0.0, 0.0, cfg)
    out.append(_res("kernel-diagonal-positive", max(0.0, -k00), 1e-12,
                    note=f"K_t(0,0) = {k00:.6e}"))

    grid = SpectralGrid(p, cfg, t_min=t)
    f = _gauss_battery(p)[0]
    err = 0.0
    for u in (-1.0, 0.0, 0.7, 2.0):
        F_u = semigroup_apply(p, t, f, np.array([u]), "convolution", cfg).output.values[0]
        sec = rkhs_mod.kernel_section_preimage(p, t, u, cfg, grid=grid)
        ip = rkhs_mod.image_inner(p, t, rkhs_mod.ImageFunction(f, t, p),
                                  rkhs_mod.ImageFunction(sec, t, p), cfg)
        err = max(err, abs(F_u - ip) / (1 + abs(F_u)))
    out.append(_res("reproducing-property", err, 1e-6))

    def l2sq(sf):
        r = integrate_line(lambda v: np.abs(np.asarray(sf(v))) ** 2 * weight_A(p, v),
                           integrand_decay(sf.decay, p), cfg)
        return float(np.real(r.value))

    ff = rkhs_mod.ImageFunction(f, t, p)
    iso_direct = rkhs_mod.image_inner(p, t, ff, ff, cfg)
    out.append(_res("transferred-inner-product-isometry",
                    abs(iso_direct - l2sq(f)) / l2sq(f), 1e-5))

    hf = spectral_callback(p, f, cfg)
    ptf = semigroup_apply(p, t, f, np.linspace(-10, 10, 241), "spectral", cfg).output
    lhs = l2sq(ptf)

    def rhs_int(lams):
        m2 = np.exp(-t * (lams ** 2 + p.rho ** 2))
        return m2 * np.abs(hf(lams)) ** 2 * plancherel_density(p, lams)

    rhs = float(np.real(integrate_line(rhs_int, SupportRadius(30.0), cfg).value))
    out.append(_res("image-norm-spectral-cross-check", abs(lhs - rhs) / abs(lhs), 1e-5))

    worst = 0.0
    for _ in range(5):
        n = int(rng.integers(2, 7))
        nodes = np.sort(rng.uniform(-2.2, 2.2, n))
        while np.unique(nodes).size != n:
            nodes = np.sort(rng.uniform(-2.2, 2.2, n))
        M = rkhs_mod.gram_matrix(p, t, nodes, cfg)
        scaled = np.linalg.eigvalsh((M + M.T) / 2).min() / max(1e-300, np.abs(M).max())
        worst = min(worst, float(scaled))
    out.append(_res("gram-positive-semidefinite", max(0.0, -worst), 1e-8))

    a_, b_ = 0.4, -1.1
    kaa = rkhs_mod.reproducing_kernel(p, t, a_, a_, cfg)
    kbb = rkhs_mod.reproducing_kernel(p, t, b_, b_, cfg)
    kab = rkhs_mod.reproducing_kernel(p, t, a_, b_, cfg)
    out.append(_res("kernel-cauchy-schwarz", max(0.0, kab ** 2 - kaa * kbb), 1e-8))

    scan = rng.uniform(-3, 3, size=(40, 2))
    sup = max(abs(eigenfunction_G(p, lam, x)) for lam, x in scan)
    sup = max(sup, max(abs(eigenfunction_G(GENERIC, lam, x)) for lam, x in scan))
    out.append(_res("eigenfunction-global-unit-bound", max(0.0, sup - 1.0), 1e-12,
                    note=f"empirical sup |G| = {sup:.6f}"))

    nodes = np.array([-1.0, 0.0, 0.7, 2.0])
    M = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            M[i, j] = rkhs_mod.kernel_K(p, t, nodes[i], nodes[j], cfg)
    min_eig = float(np.linalg.eigvalsh((M + M.T) / 2).min())
    out.append(_res("reflected-kernel-gram-psd", max(0.0, -min_eig / np.abs(M).max()), 1e-8,
                    defect=True,
                    note="argument reflection flips the odd-odd spectral part; the "
                         "unreflected reproducing kernel is the PSD one"))
    return out


# ----------------------------------------------------------------- green


def _suite_green(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    out = []
    xs = np.linspace(-2, 2, 9)

    err = 0.0
    for p in (CLASSICAL, GENERIC):
        for f in (_gauss_battery(p)[0], _gauss_battery(p)[2]):
            prof = green_mod.green_profile(p, f, cfg)
            res = green_mod.poisson_residual(p, f, prof, xs, cfg)
            err = max(err, float(np.max(np.abs(res))))
    out.append(_res("poisson-equation-residual", err, 1e-4))

    p = CLASSICAL
    zero = from_callback(lambda x: np.zeros_like(x), GaussianDecay(1.0),
                         spectral=lambda lams: np.zeros_like(lams))
    gz = green_mod.green_apply(p, zero, xs, cfg)
    out.append(_res("zero-maps-to-zero", float(np.max(np.abs(gz.values))), 1e-12))

    f1, f2 = _gauss_battery(p)[0], _gauss_battery(p)[2]
    comb = from_callback(lambda x: 1.3 * f1(x) - 0.7 * f2(x), f1.decay)
    lin_err = float(np.max(np.abs(
        green_mod.green_apply(p, comb, xs, cfg).values
        - 1.3 * green_mod.green_apply(p, f1, xs, cfg).values
        + 0.7 * green_mod.green_apply(p, f2, xs, cfg).values)))
    out.append(_res("green-linearity", lin_err, 1e-8))

    err = 0.0
    for f in (f1,):
        sp = green_mod.green_apply(p, f, xs, cfg).values
        tr = green_mod.green_time_route(p, f, xs, cfg)
        err = max(err, float(np.max(np.abs(sp - tr))))
    out.append(_res("spectral-vs-time-integral-route", err, 1e-3))

    hf = spectral_callback(p, f1, cfg)

    def bound_int(lams):
        return np.abs(hf(lams)) / (lams ** 2 + p.rho ** 2) * np.abs(plancherel_density(p, lams))

    bound = 2.0 * float(np.real(integrate_line(bound_int, SupportRadius(30.0), cfg).value))
    sup = float(np.max(np.abs(green_mod.green_apply(p, f1, xs, cfg).values)))
    out.append(_res("green-boundedness", max(0.0, sup - bound), 1e-10,
                    note=f"sup {sup:.6f} vs modulus bound {bound:.6f}"))

    lam0 = 1.5
    mode = EvaluableFunction(lambda v: eigenfunction_G(p, lam0, v))
    t2 = np.asarray(apply_T2(p, mode, xs))
    gvals = eigenfunction_G(p, lam0, xs)
    residual = 0.5 * (t2 - p.rho ** 2 * gvals) + 0.5 * (lam0 ** 2 + p.rho ** 2) * gvals
    out.append(_res("single-mode-inversion-consistency",
                    float(np.max(np.abs(residual))), 1e-5))
    return out


# ----------------------------------------------------------------- markov


def _suite_markov(cfg: QuadratureConfig, seed: int) -> list[PropertyResult]:
    out = []
    p = CLASSICAL
    t_step = 0.5
    x_nodes = np.linspace(-2, 2, 9)
    y_grid = np.linspace(-10, 10, 801)
    grid = SpectralGrid(p, cfg, t_min=t_step)
    table = markov_mod.build_transition_table(p, t_step, x_nodes, y_grid, cfg, grid=grid)

    ref = kernel_mass(p, t_step, 0.0, cfg, grid=grid)
    masses = np.trapezoid(table.densities, y_grid, axis=1)
    out.append(_res("transition-mass-x-independence",
                    float(np.max(np.abs(masses - ref)) / ref), 1e-5))

    cdf_err = max(float(np.max(np.abs(table.cdfs[:, 0]))),
                  float(np.max(np.abs(table.cdfs[:, -1] - 1.0))))
    out.append(_res("cdf-endpoints", cdf_err, 1e-12))

    rng = np.random.default_rng(seed)
    n = 100_000
    node_x = 0.5  # sampling at a node avoids the two-node blending bias
    ix = int(np.where(x_nodes == node_x)[0][0])
    us = rng.random(n)
    draws = table.inverse_cdf(ix, us)
    m, mc = grid.multiplier(t_step)

    def moment(k):
        r = integrate_line(
            lambda ys: np.array([grid.pair_integral(m, mc, node_x, float(y))[0] for y in ys])
            * ys ** k * weight_A(p, ys),
            SupportRadius(10.0), cfg)
        return float(np.real(r.value))

    m0, m1, m2 = moment(0), moment(1), moment(2)
    mean_q, var_q = m1 / m0, m2 / m0 - (m1 / m0) ** 2
    se_mean = np.sqrt(var_q / n)
    mu4 = float(np.mean((draws - mean_q) ** 4))
    se_var = np.sqrt(max(mu4 - var_q ** 2, 0.0) / n)
    herr = max(
        abs(np.mean(draws) - mean_q) / (3 * se_mean),
        abs(np.var(draws) - var_q) / (3 * se_var),
    )
    out.append(_res("sampled-moments-vs-quadrature", herr, 1.0,
                    note="errors scaled by three standard errors"))

    killed_table = markov_mod.TransitionTable(
        table.t_step, table.params, table.x_nodes, table.y_grid,
        table.densities, table.cdfs, survival=0.6)
    rng2 = np.random.default_rng(seed + 1)
    kills = sum(markov_mod.sample_step(killed_table, 0.0, rng2) == markov_mod.KILLED
                for _ in range(20000))
    se = np.sqrt(0.6 * 0.4 / 20000)
    out.append(_res("killing-machinery-rate", abs(kills / 20000 - 0.4) / (3 * se), 1.0,
                    note="sub-probability table with survival forced to 0.6"))

    paths_a = markov_mod.simulate_paths(table, 0.3, 4, 32, seed=seed)
    paths_b = markov_mod.simulate_paths(table, 0.3, 4, 32, seed=seed)
    det = all(a.states == b.states for a, b in zip(paths_a, paths_b))
    out.append(_res("path-simulation-determinism", 0.0 if det else 1.0, 0.5))

    from scipy.stats import ks_2samp

    wide_nodes = np.linspace(-6, 6, 25)
    wide = markov_mod.build_transition_table(p, t_step, wide_nodes, y_grid, cfg, grid=grid)
    grid2 = SpectralGrid(p, cfg, t_min=2 * t_step)
    wide2 = markov_mod.build_transition_table(p, 2 * t_step, wide_nodes, y_grid, cfg, grid=grid2)
    two_steps = [pp.states[-1] for pp in markov_mod.simulate_paths(wide, 0.0, 2, 4000, seed=seed + 2)
                 if pp.states[-1] != markov_mod.KILLED]
    one_step = [pp.states[-1] for pp in markov_mod.simulate_paths(wide2, 0.0, 1, 4000, seed=seed + 3)
                if pp.states[-1] != markov_mod.KILLED]
    stat_ck = ks_2samp(two_steps, one_step)
    out.append(_res("chapman-kolmogorov-monte-carlo", 0.0 if stat_ck.pvalue > 0.01 else 1.0, 0.5,
                    note=f"two-sample KS p-value {stat_ck.pvalue:.4f}"))

    plus = [abs(pp.states[-1]) for pp in markov_mod.simulate_paths(wide, 0.8, 2, 4000, seed=seed + 4)
            if pp.states[-1] != markov_mod.KILLED]
    minus = [abs(pp.states[-1]) for pp in markov_mod.simulate_paths(wide, -0.8, 2, 4000, seed=seed + 5)
             if pp.states[-1] != markov_mod.KILLED]
    stat_m = ks_2samp(plus, minus)
    out.append(_res("mirror-symmetry-of-radial-part", 0.0 if stat_m.pvalue > 0.01 else 1.0, 0.5,
                    note=f"two-sample KS p-value {stat_m.pvalue:.4f}"))

    err = 0.0
    e = np.exp
    coshrho = EvaluableFunction(
        lambda x, r=p.rho: np.cosh(x) ** (-r),
        d1=lambda x, r=p.rho: -r * np.sinh(x) * np.cosh(x) ** (-r - 1),
        d2=lambda x, r=p.rho: r * (r + 1) * np.sinh(x) ** 2 * np.cosh(x) ** (-r - 2)
        - r * np.cosh(x) ** (-r),
        parity="even")
    gauss = EvaluableFunction(lambda x: e(-x ** 2), d1=lambda x: -2 * x * e(-x ** 2),
                              d2=lambda x: (4 * x ** 2 - 2) * e(-x ** 2), parity="even")
    for f_even in (gauss, coshrho):
        for x in (0.5, 1.0, 2.0):
            lhs, rhs = markov_mod.radial_generator_check(p, f_even, x)
            err = max(err, abs(lhs - rhs))
    const = EvaluableFunction(lambda x: np.full_like(x, 2.2), d1=lambda x: np.zeros_like(x),
                              d2=lambda x: np.zeros_like(x), parity="even")
    lhs, rhs = markov_mod.radial_generator_check(p, const, 1.0)
    err = max(err, abs(lhs - p.rho ** 2 * 2.2), abs(rhs - p.rho ** 2 * 2.2))
    out.append(_res("radial-generator-identity", err, 1e-8))

    expected = 1.0 - np.exp(-0.5 * t_step * p.rho ** 2)
    rng3 = np.random.default_rng(seed + 6)
    kills = sum(markov_mod.sample_step(table, 0.0, rng3) == markov_mod.KILLED
                for _ in range(100_000))
    se = max(np.sqrt(expected * (1 - expected) / 100_000), 1e-12)
    out.append(_res("killing-rate-spectral-gap-value", abs(kills / 1e5 - expected) / (3 * se),
                    1.0, defect=True,
                    note="the kernels are probability kernels; no killing occurs"))
    return out


SUITES: dict[str, Callable[[QuadratureConfig, int], list[PropertyResult]]] = {
    "specfun": _suite_specfun,
    "operator": _suite_operator,
    "transform": _suite_transform,
    "heat": _suite_heat,
    "rkhs": _suite_rkhs,
    "green": _suite_green,
    "markov": _suite_markov,
}
SUITE_NAMES = list(SUITES)


def run_suite(name: str, cfg: Optional[QuadratureConfig] = None, seed: int = 2024) -> list[PropertyResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {SUITE_NAMES + ['all']}")
    return SUITES[name](cfg or QuadratureConfig(), seed)


def run_suites(names: Iterable[str], cfg: Optional[QuadratureConfig] = None,
               seed: int = 2024) -> dict[str, list[PropertyResult]]:
    return {n: run_suite(n, cfg, seed) for n in names}


def report_json(results: dict[str, list[PropertyResult]]) -> str:
    payload = []
    for suite, props in results.items():
        payload.append({
            "suite": suite,
            "properties": [
                {
                    "name": r.name,
                    "max_err": r.max_err,
                    "tol": r.tol,
                    "pass": r.passed,
                    "expected_defect": r.expected_defect,
                    "ok": r.ok,
                    **({"note": r.note} if r.note else {}),
                }
                for r in props
            ],
            "ok": all(r.ok for r in props),
        })
    return json.dumps(payload, indent=2, sort_keys=True)
