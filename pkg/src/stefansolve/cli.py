"""Command-line front end: solve, profile and verify subcommands.

Every output document embeds the run manifest (subcommand, input path,
setting overrides, output directory, tool version, seed) so identical
invocations produce byte-identical files.

Exit codes: 0 success, 1 input error, 2 solver non-convergence,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import ConvergenceError, StefanSolveError
from .oracle import bisect_scalar, enthalpy_grid_for, fd_gradient, simulate_enthalpy_1d
from .potential_1d import grad_1d
from .potential_radial import grad_radial
from .problems import RadialProblem, RiemannProblem1D, problem_from_dict
from .profile import build_profile, flux_at_origin, stefan_residual
from .solve import SolverSettings, minimize

RESIDUAL_TOL = 1e-10
SPREAD_TOL = 1e-8
FD_TOL = 1e-7
ORACLE_TOL = 0.02
FLUX_TOL = 1e-6


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stefansolve",
        description="Solve multi-phase free-boundary instances by potential "
                    "minimization; results as JSON, sampled curves as CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="instance JSON file")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="multistart base seed")
        p.add_argument("--starts", type=int, default=16, help="number of starts")
        p.add_argument("--grad-tol", type=float, default=1e-12,
                       help="gradient sup-norm tolerance")
        p.add_argument("--extended-front", type=float, default=None, metavar="D0",
                       help="radial only: override the outermost latent heat, "
                            "enabling the extra-front variant")

    p_solve = sub.add_parser("solve", help="minimize the potential and write result.json")
    common(p_solve)

    p_profile = sub.add_parser("profile", help="sample the solved profile to CSV")
    common(p_profile)
    p_profile.add_argument("--samples", type=int, default=128,
                           help="samples per phase")
    p_profile.add_argument("--time", type=float, default=None,
                           help="also emit x,u columns at this time")
    p_profile.add_argument("--fronts", default=None,
                           help="comma-separated front override (skips solving)")

    p_verify = sub.add_parser("verify", help="run verification checks, write verify.json")
    common(p_verify)
    p_verify.add_argument("--fronts", default=None,
                          help="comma-separated front override (skips solving)")
    p_verify.add_argument("--fd-check", action="store_true",
                          help="check the analytic gradient against finite differences")
    p_verify.add_argument("--oracle", action="store_true",
                          help="run the independent oracle (enthalpy march in 1D, "
                               "scalar bisection for single-front instances)")
    p_verify.add_argument("--flux", action="store_true",
                          help="radial only: check the sphere flux identity")
    return parser


def _load(args):
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read {args.input}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(
            f"malformed JSON in {args.input}: {exc.msg} "
            f"(line {exc.lineno}, column {exc.colno})") from exc
    if args.extended_front is not None:
        if data.get("kind") != "radial":
            raise _InputError("--extended-front applies to radial instances only")
        data = {**data, "d0": args.extended_front}
    try:
        return problem_from_dict(data)
    except StefanSolveError as exc:
        raise _InputError(str(exc)) from exc


class _InputError(Exception):
    pass


def _manifest(args, overrides: dict) -> dict:
    return {
        "subcommand": args.command,
        "input": str(args.input),
        "out_dir": str(args.out_dir),
        "seed": args.seed,
        "overrides": overrides,
        "version": __version__,
    }


def _overrides(args) -> dict:
    out = {"starts": args.starts, "grad_tol": args.grad_tol}
    if args.extended_front is not None:
        out["extended_front"] = args.extended_front
    if getattr(args, "fronts", None):
        out["fronts"] = args.fronts
    if getattr(args, "samples", None) is not None:
        out["samples"] = args.samples
    if getattr(args, "time", None) is not None:
        out["time"] = args.time
    return out


def _settings(args) -> SolverSettings:
    return SolverSettings(grad_tol=args.grad_tol, n_starts=args.starts, seed=args.seed)


def _write_json(path: Path, document: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_fronts(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise _InputError(f"cannot parse --fronts {text!r}") from exc


def cmd_solve(args) -> int:
    problem = _load(args)
    report = minimize(problem, _settings(args))
    residuals = stefan_residual(problem, np.array(report.fronts))
    document = {
        "fronts": list(report.fronts),
        "energy": report.energy,
        "grad_norm": report.grad_norm,
        "iterations": report.iterations,
        "residuals": [float(r) for r in residuals],
        "multistart_spread": report.spread,
        "all_starts_agree": report.all_starts_agree,
        "n_converged": report.n_converged,
        "manifest": _manifest(args, _overrides(args)),
    }
    _write_json(Path(args.out_dir) / "result.json", document)
    print(f"fronts: {list(report.fronts)}  energy: {report.energy:.12g}")
    return 0


def _phase_samples(problem, fronts: np.ndarray, per_phase: int) -> np.ndarray:
    """Sample coordinates per phase, excluding the fronts themselves."""
    windows = []
    if isinstance(problem, RiemannProblem1D):
        a = problem.config.diffusivities
        lo = fronts[0] - 8.0 * a[0]
        windows.append(np.linspace(lo, fronts[0], per_phase + 2)[1:-1])
        for i in range(1, problem.m):
            windows.append(np.linspace(fronts[i - 1], fronts[i], per_phase + 2)[1:-1])
        hi = fronts[-1] + 8.0 * a[-1]
        windows.append(np.linspace(fronts[-1], hi, per_phase + 2)[1:-1])
    else:
        a = problem.config.diffusivities
        asc = fronts[::-1]  # innermost first
        inner = np.exp(np.linspace(math.log(asc[0] * 1e-2), math.log(asc[0]),
                                   per_phase + 2)[1:-1])
        windows.append(inner)
        for j in range(asc.size - 1):
            windows.append(np.linspace(asc[j], asc[j + 1], per_phase + 2)[1:-1])
        hi = asc[-1] + 8.0 * a[0]
        windows.append(np.linspace(asc[-1], hi, per_phase + 2)[1:-1])
    return np.concatenate(windows)


def _front_temperatures(problem) -> list[float]:
    u = problem.config.temperatures
    if isinstance(problem, RiemannProblem1D):
        return [u[i] for i in range(1, problem.m + 1)]
    temps = [u[i] for i in range(problem.m, 0, -1)]  # ascending radii
    if problem.extended:
        temps.append(u[0])
    return temps


def cmd_profile(args) -> int:
    problem = _load(args)
    if args.fronts:
        fronts = _parse_fronts(args.fronts)
    else:
        fronts = np.array(minimize(problem, _settings(args)).fronts)
    profile = build_profile(problem, fronts)

    xs = _phase_samples(problem, fronts, args.samples)
    asc_fronts = np.sort(fronts)
    front_vs = _front_temperatures(problem)

    rows = [(float(x), float(profile.value(float(x)))) for x in xs]
    rows += list(zip(asc_fronts.tolist(), front_vs))
    rows.sort(key=lambda r: r[0])

    lines = []
    if args.time is None:
        lines.append("xi,v")
        for x, v in rows:
            lines.append(f"{x!r},{v!r}")
    else:
        t = args.time
        if not t > 0.0:
            raise _InputError("--time must be positive")
        lines.append("xi,v,x,u")
        for x, v in rows:
            lines.append(f"{x!r},{v!r},{x * math.sqrt(t)!r},{v!r}")
    lines.append("# manifest: " + json.dumps(_manifest(args, _overrides(args)),
                                             sort_keys=True))
    out = Path(args.out_dir) / "profile.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def _check(name: str, passed: bool, error: float, tol: float, detail: str = "") -> dict:
    return {"name": name, "passed": bool(passed), "error": float(error),
            "tolerance": float(tol), "detail": detail}


def _write_trace_csv(path: Path, trace) -> None:
    """Extracted front paths (t, x_i(t)) from the enthalpy march."""
    m = trace.positions.shape[1]
    lines = ["t," + ",".join(f"x_{i + 1}" for i in range(m))]
    for k, t in enumerate(trace.times):
        lines.append(f"{float(t)!r}," + ",".join(f"{float(x)!r}"
                                                 for x in trace.positions[k]))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_verify(args) -> int:
    problem = _load(args)
    checks = []
    overridden = bool(args.fronts)
    if overridden:
        fronts = _parse_fronts(args.fronts)
        report = None
    else:
        report = minimize(problem, _settings(args))
        fronts = np.array(report.fronts)
        checks.append(_check("converged", report.grad_norm <= args.grad_tol,
                             report.grad_norm, args.grad_tol))
        checks.append(_check("multistart_spread", report.spread <= SPREAD_TOL,
                             report.spread, SPREAD_TOL,
                             f"{report.n_converged}/{report.n_starts} starts converged"))

    residuals = stefan_residual(problem, fronts)
    res_err = float(np.max(np.abs(residuals)))
    checks.append(_check("stefan_residual", res_err <= RESIDUAL_TOL,
                         res_err, RESIDUAL_TOL))

    if args.fd_check:
        grad = grad_1d if isinstance(problem, RiemannProblem1D) else grad_radial
        g = grad(problem, fronts)
        g_fd = fd_gradient(lambda x: _energy_of(problem, x), fronts)
        err = float(np.max(np.abs(g - g_fd))) / (1.0 + float(np.max(np.abs(g))))
        checks.append(_check("gradient_fd", err <= FD_TOL, err, FD_TOL))

    if args.oracle:
        if isinstance(problem, RiemannProblem1D):
            trace = simulate_enthalpy_1d(problem, enthalpy_grid_for(problem, fronts))
            err = float(np.max(np.abs(trace.slopes - np.asarray(fronts))
                               / np.maximum(np.abs(fronts), 1e-3)))
            checks.append(_check("pde_oracle", err <= ORACLE_TOL, err, ORACLE_TOL,
                                 f"fitted slopes {trace.slopes.tolist()}"))
            _write_trace_csv(Path(args.out_dir) / "oracle_trace.csv", trace)
        if problem.m == 1 and not getattr(problem, "extended", False):
            root = bisect_scalar(problem)
            err = abs(float(fronts[-1]) - root)
            checks.append(_check("bisection_oracle", err <= 1e-10, err, 1e-10,
                                 f"root {root!r}"))

    if args.flux:
        if not isinstance(problem, RadialProblem):
            raise _InputError("--flux applies to radial instances only")
        profile = build_profile(problem, fronts)
        t = 1.0
        delta = fronts[-1] * math.sqrt(t) / 10.0
        measured = flux_at_origin(problem, profile, t, delta, numeric=True)
        a_m = problem.config.diffusivities[-1]
        ratio = math.exp(-delta * delta / (4.0 * a_m * a_m * t))
        expected = (problem.amplitude * problem.omega_n
                    * (a_m * math.sqrt(t)) ** (problem.dimension - 2) * ratio)
        err = abs(measured - expected) / abs(expected)
        checks.append(_check("flux_identity", err <= FLUX_TOL, err, FLUX_TOL,
                             f"attenuation ratio {ratio!r}"))

    all_passed = all(c["passed"] for c in checks)
    document = {
        "checks": checks,
        "all_passed": all_passed,
        "fronts": [float(v) for v in fronts],
        "manifest": _manifest(args, _overrides(args)),
    }
    _write_json(Path(args.out_dir) / "verify.json", document)
    for c in checks:
        status = "pass" if c["passed"] else "FAIL"
        print(f"{status:>4}  {c['name']}: error {c['error']:.3e} (tol {c['tolerance']:.0e})")
    return 0 if all_passed else 3


def _energy_of(problem, x):
    from .potential_1d import energy_1d
    from .potential_radial import energy_radial
    if isinstance(problem, RiemannProblem1D):
        return energy_1d(problem, x)
    return energy_radial(problem, x)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "profile":
            return cmd_profile(args)
        return cmd_verify(args)
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return 2
    except StefanSolveError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
