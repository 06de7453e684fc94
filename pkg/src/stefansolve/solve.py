"""Damped Newton minimization over the open ordered cones.

The 1D potential is strictly convex, so plain Newton with an Armijo
backtracking line search converges quadratically; the radial potential
is not convex, so a failed Cholesky factorization triggers a Levenberg
shift (doubling from ``1e-8 * |H|``) and, as a last resort, steepest
descent.  Iterates stay strictly feasible through a
fraction-to-boundary rule: every ordering gap (and the innermost radius
in the radial case) retains at least ``tau`` of its current slack.

Convergence is declared on the sup-norm of the gradient, which is the
actual system of interface conditions, never on an energy stall.
:func:`minimize` wraps the single-path solver in a deterministic
multi-start driver whose agreement spread doubles as an empirical
uniqueness check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, InfeasibleError, ValidationError
from .potential_1d import coercivity_box_1d, energy_1d, grad_1d, hess_1d
from .potential_radial import (
    coercivity_box_radial,
    energy_radial,
    grad_radial,
    hess_radial,
    lower_bound_min,
)
from .problems import RadialProblem, RiemannProblem1D

# Pairwise multistart spread below which the runs are declared to agree.
AGREEMENT_SPREAD = 1e-8


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and line-search knobs; all solves are deterministic in these."""

    grad_tol: float = 1e-12
    step_tol: float = 1e-14
    max_iter: int = 200
    tau: float = 0.01
    armijo: float = 1e-4
    backtrack: float = 0.5
    n_starts: int = 16
    seed: int = 0

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.step_tol > 0 and self.max_iter > 0):
            raise ValidationError("tolerances and max_iter must be positive")
        if not (0.0 < self.tau < 1.0 and 0.0 < self.backtrack < 1.0):
            raise ValidationError("tau and backtrack must lie in (0, 1)")
        if not (0.0 < self.armijo < 1.0):
            raise ValidationError("armijo constant must lie in (0, 1)")
        if self.n_starts < 1:
            raise ValidationError("n_starts must be >= 1")


@dataclass(frozen=True)
class SolveReport:
    """Result of a multi-start solve.

    ``spread`` is the maximum pairwise sup-distance among the converged
    minimizers; ``all_starts_agree`` flags ``spread <= 1e-8``, the
    empirical surrogate for uniqueness of the critical point.
    """

    fronts: tuple[float, ...]
    energy: float
    grad_norm: float
    iterations: int
    hessian_psd_at_solution: bool
    all_starts_agree: bool
    spread: float
    n_starts: int
    n_converged: int


@dataclass(frozen=True)
class StepInfo:
    step_length: float
    newton: bool
    shift: float
    energy: float
    grad_norm: float


def _ops(problem):
    if isinstance(problem, RiemannProblem1D):
        return energy_1d, grad_1d, hess_1d
    if isinstance(problem, RadialProblem):
        return energy_radial, grad_radial, hess_radial
    raise ValidationError(f"unsupported problem type {type(problem).__name__}")


def _slacks(problem, xi: np.ndarray) -> np.ndarray:
    if isinstance(problem, RiemannProblem1D):
        return np.diff(xi) if xi.size > 1 else np.empty(0)
    parts = [-np.diff(xi)] if xi.size > 1 else []
    parts.append(np.array([xi[-1]]))
    return np.concatenate(parts)


def _default_guess(problem) -> np.ndarray:
    if isinstance(problem, RiemannProblem1D):
        amax = max(problem.config.diffusivities)
        return np.linspace(-amax, amax, problem.m + 2)[1:-1].copy()
    rho, _ = lower_bound_min(problem)
    exponents = np.arange(problem.n_fronts - 1, -1, -1)
    return rho * np.power(2.0, exponents)


def _sampling_box(problem, level: float):
    if isinstance(problem, RiemannProblem1D):
        return coercivity_box_1d(problem, level)
    return coercivity_box_radial(problem, level)


def _random_in_box(problem, box, rng) -> np.ndarray:
    """Uniform draw from the coercivity box (shifted-order parameterization)."""
    default = _default_guess(problem)
    if box is None:
        return default
    m = problem.m
    if isinstance(problem, RiemannProblem1D):
        shift = 0.0 if math.isinf(box.delta1) else box.delta1
        width_hi = box.r2 - (m - 1) * shift
        if not width_hi > box.r1:
            return default
        eta = np.sort(rng.uniform(box.r1, width_hi, size=m))
        xi = eta + shift * np.arange(m)
        if m > 1 and not np.all(np.diff(xi) > 0.0):
            xi += 1e-12 * np.arange(m)  # break measure-zero ties
        return xi
    shift = 0.0 if math.isinf(box.delta) else box.delta
    width_hi = box.r2 - (m - 1) * shift
    if not width_hi > box.r1:
        return default
    eta = np.sort(rng.uniform(box.r1, width_hi, size=m))[::-1]
    core = eta + shift * (m - 1 - np.arange(m))
    if m > 1 and not np.all(np.diff(core) < 0.0):
        core += 1e-12 * (m - 1 - np.arange(m))
    if problem.extended:
        xi0 = core[0] * (1.0 + rng.uniform(0.05, 2.0))
        return np.concatenate(([xi0], core))
    return core


def initial_guess(problem, strategy: str = "default", rng=None, level: float | None = None) -> np.ndarray:
    """Strictly feasible starting point.

    ``default``: equispaced in ``[-a_max, a_max]`` (1D) or a geometric
    cascade anchored at the minimizer of the scalar lower-bound profile
    (radial).  ``random``: uniform in the coercivity box at
    ``level`` (defaults to the energy of the default guess); needs a
    ``numpy`` Generator.
    """
    if strategy == "default":
        return _default_guess(problem)
    if strategy != "random":
        raise ValidationError(f"unknown start strategy {strategy!r}")
    if rng is None:
        raise ValidationError("random strategy needs a numpy Generator")
    energy, _, _ = _ops(problem)
    c = level if level is not None else energy(problem, _default_guess(problem))
    return _random_in_box(problem, _sampling_box(problem, c), rng)


def _direction(H: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, bool, float]:
    """Newton direction with Levenberg fallback; returns (d, newton?, shift)."""
    shift = 0.0
    scale = float(np.max(np.abs(H))) if H.size else 1.0
    if scale == 0.0:
        scale = 1.0
    for attempt in range(41):
        try:
            np.linalg.cholesky(H + shift * np.eye(H.shape[0]))
        except np.linalg.LinAlgError:
            shift = 1e-8 * scale if shift == 0.0 else 2.0 * shift
            continue
        d = np.linalg.solve(H + shift * np.eye(H.shape[0]), -g)
        if float(g @ d) < 0.0:
            return d, attempt == 0, shift
        break
    return -g, False, math.inf


def newton_step(problem, xi, settings: SolverSettings | None = None) -> tuple[np.ndarray, StepInfo]:
    """One damped, feasibility-preserving step; zero step at a critical point."""
    settings = settings or SolverSettings()
    energy, grad, hess = _ops(problem)
    xi = np.asarray(xi, dtype=float)
    fx = energy(problem, xi)
    g = grad(problem, xi)
    gnorm = float(np.max(np.abs(g)))
    if gnorm <= settings.grad_tol:
        return xi.copy(), StepInfo(0.0, True, 0.0, fx, gnorm)

    d, newton, shift = _direction(hess(problem, xi), g)
    slope = float(g @ d)

    # Fraction-to-boundary: keep tau of every slack.
    s = _slacks(problem, xi)
    s_new = _slacks(problem, xi + d)
    rate = s_new - s
    t_max = 1.0
    for sj, rj in zip(s, rate):
        if rj < 0.0:
            t_max = min(t_max, (1.0 - settings.tau) * sj / (-rj))
    # Slack of a few ulps of the energy keeps the endgame alive once the
    # quadratic decrease falls below float resolution; convergence is
    # still declared on the gradient, never on this comparison.
    slack = 8.0 * np.finfo(float).eps * max(1.0, abs(fx))
    t = t_max
    while True:
        trial = xi + t * d
        try:
            f_trial = energy(problem, trial)
        except InfeasibleError:
            f_trial = math.inf
        if f_trial <= fx + settings.armijo * t * slope + slack:
            break
        t *= settings.backtrack
        if t * float(np.max(np.abs(d))) < settings.step_tol:
            raise ConvergenceError(
                "line search failed: step below step_tol without decrease",
                best_fronts=xi.copy(), best_grad_norm=gnorm,
            )
    new_xi = xi + t * d
    g_new = grad(problem, new_xi)
    return new_xi, StepInfo(t, newton, shift, f_trial, float(np.max(np.abs(g_new))))


def minimize_path(problem, x0, settings: SolverSettings | None = None,
                  collect_trace: bool = False):
    """Run Newton from one start; returns (xi, energy, grad_norm, iters, trace, ok)."""
    settings = settings or SolverSettings()
    energy, grad, _ = _ops(problem)
    xi = np.asarray(x0, dtype=float).copy()
    gnorm = float(np.max(np.abs(grad(problem, xi))))
    trace = [gnorm] if collect_trace else None
    iters = 0
    while gnorm > settings.grad_tol and iters < settings.max_iter:
        try:
            xi, info = newton_step(problem, xi, settings)
        except ConvergenceError:
            return xi, energy(problem, xi), gnorm, iters, trace, False
        gnorm = info.grad_norm
        iters += 1
        if collect_trace:
            trace.append(gnorm)
    return xi, energy(problem, xi), gnorm, iters, trace, gnorm <= settings.grad_tol


def _psd_at(problem, xi) -> bool:
    _, _, hess = _ops(problem)
    H = hess(problem, xi)
    evals = np.linalg.eigvalsh(H)
    floor = -1e-9 * max(1.0, float(np.max(np.abs(H))))
    return bool(evals.min() >= floor)


def minimize(problem, settings: SolverSettings | None = None) -> SolveReport:
    """Deterministic multi-start minimization.

    Start 0 is the default guess; start k draws uniformly from the
    coercivity box at the default guess's energy level using generator
    seed ``settings.seed + k``.  Raises :class:`ConvergenceError` when
    no start reaches the gradient tolerance.
    """
    settings = settings or SolverSettings()
    energy, _, _ = _ops(problem)
    default = _default_guess(problem)
    level = energy(problem, default)
    box = _sampling_box(problem, level) if settings.n_starts > 1 else None

    minimizers = []
    results = []
    best = None
    for k in range(settings.n_starts):
        if k == 0:
            x0 = default
        else:
            rng = np.random.default_rng(settings.seed + k)
            x0 = _random_in_box(problem, box, rng)
        xi, fx, gnorm, iters, _, ok = minimize_path(problem, x0, settings)
        results.append((xi, fx, gnorm, iters, ok))
        if ok:
            minimizers.append(xi)
            if best is None or fx < best[1]:
                best = (xi, fx, gnorm, iters)

    if best is None:
        best_effort = min(results, key=lambda r: r[2])
        raise ConvergenceError(
            f"no start converged within {settings.max_iter} iterations "
            f"(best grad norm {best_effort[2]:.3e})",
            best_fronts=best_effort[0], best_grad_norm=best_effort[2],
        )

    spread = 0.0
    for i in range(len(minimizers)):
        for j in range(i + 1, len(minimizers)):
            spread = max(spread, float(np.max(np.abs(minimizers[i] - minimizers[j]))))

    xi, fx, gnorm, iters = best
    return SolveReport(
        fronts=tuple(float(v) for v in xi),
        energy=float(fx),
        grad_norm=float(gnorm),
        iterations=int(iters),
        hessian_psd_at_solution=_psd_at(problem, xi),
        all_starts_agree=spread <= AGREEMENT_SPREAD,
        spread=float(spread),
        n_starts=settings.n_starts,
        n_converged=len(minimizers),
    )
