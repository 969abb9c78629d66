"""Command line interface: evaluation, transforms, heat computations,
Poisson solves, path simulation, and the verification suites.

Numerical failures exit 1 with a JSON error object on stderr; usage errors
exit 2 (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .functions import SampledFunction, SchwartzDecay, SpectralFunction
from .green import green_apply, green_profile, poisson_residual
from .heat import heat_kernel, semigroup_apply
from .markov import KILLED, build_transition_table, simulate_paths
from .params import JacobiParams
from .quadrature import QuadratureConfig, SupportRadius
from .specfun import eigenfunction_G
from .transform import SPECTRAL_RADIUS, forward, inverse
from .verify import SUITE_NAMES, report_json, run_suites


def _add_common(sub: argparse.ArgumentParser, needs_params: bool = True) -> None:
    if needs_params:
        sub.add_argument("--alpha", type=float, required=True)
        sub.add_argument("--beta", type=float, required=True)
    sub.add_argument("--rel-tol", type=float, default=1e-9)
    sub.add_argument("--abs-tol", type=float, default=1e-11)
    sub.add_argument("--max-radius", type=float, default=60.0)
    sub.add_argument("--threads", type=int, default=0,
                     help="worker cap for parallel fills (0 = all cores)")
    sub.add_argument("--seed", type=int, default=2024)


def _cfg(args: argparse.Namespace) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                            max_radius=args.max_radius)


def _params(args: argparse.Namespace) -> JacobiParams:
    return JacobiParams(args.alpha, args.beta)


def _read_sampled(path: str, decay_r: float) -> SampledFunction:
    return SampledFunction.from_csv(Path(path).read_text(), SchwartzDecay(decay_r))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jc", description=__doc__)
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("eval-g", help="evaluate the eigenfunction G_lambda(x)")
    _add_common(s)
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--json", action="store_true")

    s = sp.add_parser("heat-kernel", help="evaluate the heat kernel p_t(x, y)")
    _add_common(s)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)

    s = sp.add_parser("transform", help="forward or inverse transform of a CSV function")
    _add_common(s)
    s.add_argument("direction", choices=["forward", "inverse"])
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--nodes", required=True, help="CSV with one output node per line")
    s.add_argument("--out", required=True)
    s.add_argument("--decay-r", type=float, default=1.0,
                   help="Schwartz decay index of the input function")

    s = sp.add_parser("semigroup", help="apply the heat semigroup to a CSV function")
    _add_common(s)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--route", choices=["spectral", "convolution"], default="spectral")
    s.add_argument("--out", required=True)
    s.add_argument("--decay-r", type=float, default=1.0)

    s = sp.add_parser("poisson", help="solve the modified Poisson equation")
    _add_common(s)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--decay-r", type=float, default=1.0)

    s = sp.add_parser("simulate", help="simulate paths of the kernel-driven process")
    _add_common(s)
    s.add_argument("--t-step", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--paths", type=int, required=True)
    s.add_argument("--x0", type=float, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--x-span", type=float, default=6.0)
    s.add_argument("--y-span", type=float, default=10.0)

    s = sp.add_parser("verify", help="run the property suites")
    _add_common(s, needs_params=False)
    s.add_argument("--suite", choices=SUITE_NAMES + ["all"], default="all")
    s.add_argument("--json", action="store_true")
    return ap


def _nodes_from_csv(path: str) -> np.ndarray:
    rows = [line.strip().split(",")[0] for line in Path(path).read_text().splitlines()
            if line.strip()]
    try:
        float(rows[0])
    except (ValueError, IndexError):
        rows = rows[1:]  # header row
    return np.asarray([float(r) for r in rows])


def _cmd_eval_g(args) -> int:
    val = eigenfunction_G(_params(args), args.lam, args.x)
    if args.json:
        print(json.dumps({"re": val.real, "im": val.imag}, sort_keys=True))
    elif abs(val.imag) < 1e-15:
        print(repr(val.real))
    else:
        print(f"{val.real!r}{val.imag:+}j")
    return 0


def _cmd_heat_kernel(args) -> int:
    from .spectral import SpectralGrid

    p, cfg = _params(args), _cfg(args)
    grid = SpectralGrid(p, cfg, t_min=args.t)
    m, mc = grid.multiplier(args.t)
    val, err = grid.pair_integral(m, mc, args.x, args.y)
    check = heat_kernel(p, args.t, args.x, args.y, cfg)
    print(f"{val!r} +- {max(err, abs(val - check)):.3e}")
    return 0


def _cmd_transform(args) -> int:
    p, cfg = _params(args), _cfg(args)
    nodes = _nodes_from_csv(args.nodes)
    if args.direction == "forward":
        f = _read_sampled(args.infile, args.decay_r)
        out = forward(p, f, nodes, cfg)
        Path(args.out).write_text(out.to_json())
    else:
        g = SpectralFunction.from_json(Path(args.infile).read_text())
        out = inverse(p, g, nodes, cfg, SupportRadius(min(SPECTRAL_RADIUS, g.lambdas[-1])))
        Path(args.out).write_text(out.to_csv())
    return 0


def _cmd_semigroup(args) -> int:
    p, cfg = _params(args), _cfg(args)
    f = _read_sampled(args.infile, args.decay_r)
    result = semigroup_apply(p, args.t, f, f.grid, args.route, cfg)
    Path(args.out).write_text(result.output.to_csv())
    return 0


def _cmd_poisson(args) -> int:
    p, cfg = _params(args), _cfg(args)
    f = _read_sampled(args.infile, args.decay_r)
    u = green_apply(p, f, f.grid, cfg)
    prof = green_profile(p, f, cfg)
    res = poisson_residual(p, f, prof, f.grid, cfg)
    lines = ["x,green,residual"]
    for x, uv, rv in zip(f.grid, np.real(u.values), res):
        lines.append(f"{x!r},{uv!r},{rv!r}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    p, cfg = _params(args), _cfg(args)
    x_nodes = np.linspace(-args.x_span, args.x_span, 25)
    y_grid = np.linspace(-args.y_span, args.y_span, 801)
    table = build_transition_table(p, args.t_step, x_nodes, y_grid, cfg)
    paths = simulate_paths(table, args.x0, args.steps, args.paths, args.seed)
    lines = ["path_id,step,state"]
    for k, path in enumerate(paths):
        for i, state in enumerate(path.states):
            cell = "" if state == KILLED else repr(float(state))
            lines.append(f"{k},{i},{cell}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_verify(args) -> int:
    names = SUITE_NAMES if args.suite == "all" else [args.suite]
    results = run_suites(names, _cfg(args), args.seed)
    if args.json:
        print(report_json(results))
    else:
        for suite, props in results.items():
            print(f"[{suite}]")
            for r in props:
                status = "pass" if r.passed else "FAIL"
                if r.expected_defect:
                    status = "defect-confirmed" if not r.passed else "DEFECT-VANISHED"
                print(f"  {status:>16}  {r.name}  max_err={r.max_err:.3e} tol={r.tol:.1e}")
    ok = all(r.ok for props in results.values() for r in props)
    return 0 if ok else 1


_HANDLERS = {
    "eval-g": _cmd_eval_g,
    "heat-kernel": _cmd_heat_kernel,
    "transform": _cmd_transform,
    "semigroup": _cmd_semigroup,
    "poisson": _cmd_poisson,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads:
        # the engine is sequential; the flag caps BLAS pools for reproducibility
        import os

        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
