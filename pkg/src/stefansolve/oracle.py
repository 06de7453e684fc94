"""Independent verification oracles.

Nothing in this module reuses the production evaluation paths: the
quadrature oracles integrate the defining integrals with adaptive
Simpson panels and explicit tail bounds, the enthalpy simulation
advances the conservative finite-difference form of the problem, and
the scalar bisection solves the single-front interface condition
directly.  Agreement between these and the potential-minimization route
is the package's correctness argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BracketError, SimulationError, ValidationError
from .problems import RadialProblem, RiemannProblem1D, build_enthalpy_pair
from .special import gaussian_pdf, radial_kernel, radial_kernel_derivative
from .special import gaussian_cdf  # stable CDF used only to assemble residuals

_SQRT_PI = math.sqrt(math.pi)


def _adaptive_simpson(f, a, b, fa, fm, fb, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    halves = (b - a) / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb)
    if depth <= 0 or abs(halves - whole) <= 15.0 * tol + 1e-305:
        return halves + (halves - whole) / 15.0
    return (_adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1)
            + _adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1))


def _integrate(f, a, b, tol, depth=30):
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    return _adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, depth)


def _romberg(f, a, b, tol, max_level=16):
    """Richardson-accelerated composite Simpson column; spectral on smooth f.

    Stops when two successive diagonal entries agree to ``tol``
    (absolute); recursive Simpson needs orders of magnitude more
    evaluations at the same accuracy on these panels.
    """
    h = b - a
    rows = [[0.5 * h * (f(a) + f(b))]]
    for k in range(1, max_level + 1):
        h *= 0.5
        count = 2 ** (k - 1)
        new = sum(f(a + (2 * i - 1) * h) for i in range(1, count + 1))
        row = [0.5 * rows[-1][0] + h * new]
        factor = 1.0
        for j in range(1, k + 1):
            factor *= 4.0
            row.append(row[j - 1] + (row[j - 1] - rows[-1][j - 1]) / (factor - 1.0))
        if k >= 4 and abs(row[-1] - rows[-1][-1]) <= tol:
            return row[-1]
        rows.append(row)
    return rows[-1][-1]


def quad_F(x: float) -> float:
    """Quadrature evaluation of the scaled Gaussian CDF (absolute error <= 1e-13).

    Integrates outward from the exact midpoint value 1/2, so no tail
    truncation enters at all.
    """
    x = float(x)
    if x == 0.0:
        return 0.5
    lo, hi = (0.0, x) if x > 0.0 else (x, 0.0)
    hi = min(hi, 80.0)
    lo = max(lo, -80.0)
    val = _integrate(lambda s: math.exp(-0.25 * s * s), lo, hi, 1e-15)
    signed = val if x > 0.0 else -val
    return 0.5 + signed / (2.0 * _SQRT_PI)


def quad_G(y: float, n: int) -> float:
    """Quadrature evaluation of the radial kernel (relative error <= 1e-12).

    The defining integral is taken in the log variable s = e^t, where
    the power-law factor flattens out and adaptive Simpson converges in
    a handful of levels; the truncated tail is certified against the
    analytic Gaussian bound and a bound that fails to be negligible
    raises.
    """
    if not y > 0.0:
        raise ValidationError("quad_G: y must be positive")
    if n < 2:
        raise ValidationError("quad_G: n must be >= 2")

    def g(t):
        expo = (2 - n) * t - 0.25 * math.exp(2.0 * t)
        return math.exp(expo) if expo > -745.0 else 0.0

    t_lo = math.log(y)
    t_hi = max(t_lo + 1.0, 4.05)  # e^{2t}/4 > 750 beyond: integrand underflows
    total = 0.0
    a = t_lo
    while a < t_hi:
        b = min(a + 1.0, t_hi)
        scale = max(g(a), g(0.5 * (a + b)), g(b))
        total += _romberg(g, a, b, 1e-15 * scale * (b - a) + 1e-300)
        a = b
    # Tail: int_S^inf s^{1-n} e^{-s^2/4} ds <= S^{1-n} * (2/S) e^{-S^2/4}.
    s_hi = math.exp(t_hi)
    expo = -0.25 * s_hi * s_hi
    tail = 0.0 if expo < -745.0 else s_hi ** (1 - n) * (2.0 / s_hi) * math.exp(expo)
    if total > 0.0 and tail > 1e-13 * total:
        raise SimulationError(f"quad_G tail bound too large: {tail:.3e} vs {total:.3e}")
    return total


@dataclass(frozen=True)
class FdGrid1D:
    """Uniform explicit grid on [-half_width, half_width].

    ``dt`` defaults to the largest stable step ``safety * dx^2 /
    (2 max a_i^2)`` and is then shrunk to divide ``end_time`` exactly.
    """

    half_width: float
    cells: int
    end_time: float
    safety: float = 0.9
    dt: float | None = None

    def __post_init__(self):
        if self.cells < 4 or self.cells % 2 != 0:
            raise ValidationError("cells must be an even integer >= 4")
        if not (self.half_width > 0 and self.end_time > 0 and 0 < self.safety <= 1):
            raise ValidationError("half_width, end_time must be positive; safety in (0, 1]")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.cells


@dataclass(frozen=True)
class FrontTrace:
    """Sampled front paths and their similarity fits.

    ``positions[k, i]`` is the extracted location of transition i at
    ``times[k]``; ``slopes[i]`` is the least-squares coefficient of
    ``x_i(t) = slope_i * sqrt(t)`` over the fit window.
    """

    times: np.ndarray
    positions: np.ndarray
    slopes: np.ndarray
    fit_residuals: np.ndarray
    conservation_defect: float
    dx: float
    dt: float
    steps: int


def enthalpy_grid_for(problem: RiemannProblem1D, fronts, cells: int = 2000) -> FdGrid1D:
    """Grid sized so the far field stays flat to 1e-12 while fronts resolve.

    Twelve diffusion lengths of padding beyond the outermost front keep
    the boundary cells on the initial data for the whole run.
    """
    amax = max(problem.config.diffusivities)
    end_time = 0.25
    span = float(np.max(np.abs(np.asarray(fronts, dtype=float)))) + 12.0 * amax
    return FdGrid1D(half_width=span * math.sqrt(end_time), cells=cells,
                    end_time=end_time)


def _level_crossing(centers: np.ndarray, u: np.ndarray, level: float, dx: float) -> float:
    below = np.nonzero(u < level)[0]
    above = np.nonzero(u > level)[0]
    if below.size == 0 or above.size == 0:
        raise SimulationError(f"no crossing found for level {level}")
    j_lo = below[-1]
    j_hi = above[0]
    if j_hi <= j_lo:
        raise SimulationError("non-monotone temperature field at front extraction")
    x_lo = centers[j_lo] + (level - u[j_lo]) * dx / (u[j_lo + 1] - u[j_lo])
    x_hi = centers[j_hi - 1] + (level - u[j_hi - 1]) * dx / (u[j_hi] - u[j_hi - 1])
    return 0.5 * (x_lo + x_hi)


def simulate_enthalpy_1d(problem: RiemannProblem1D, grid: FdGrid1D) -> FrontTrace:
    """Explicit conservative enthalpy march of the 1D instance.

    Updates ``w_j += (dt/dx^2) * (A_{j+1} - 2 A_j + A_{j-1})`` with
    ``A = alpha(invert_beta(w))``; fronts are read off the temperature
    field by level-crossing interpolation (plateau midpoints for mushy
    cells) and fitted to ``slope * sqrt(t)`` over ``t in [T/4, T]``.

    Raises
    ------
    SimulationError
        On a CFL violation or if a front reaches the boundary (the end
        cells must stay at their initial temperatures to 1e-12).
    """
    cfg = problem.config
    pair = build_enthalpy_pair(cfg)
    dx = grid.dx
    amax2 = max(a * a for a in cfg.diffusivities)
    dt_cfl = grid.safety * dx * dx / (2.0 * amax2)
    dt = grid.dt if grid.dt is not None else dt_cfl
    if dt > dt_cfl * (1.0 + 1e-12):
        raise SimulationError(f"CFL violation: dt={dt:.3e} exceeds {dt_cfl:.3e}")
    steps = max(1, math.ceil(grid.end_time / dt))
    dt = grid.end_time / steps

    centers = (-grid.half_width + (np.arange(grid.cells) + 0.5) * dx)
    w_plus = pair.beta(problem.u_plus)
    w = np.where(centers < 0.0, 0.0, w_plus)
    total0 = float(np.sum(w)) * dx
    flux_sum = 0.0
    lam = dt / (dx * dx)

    sample_every = max(1, steps // 400)
    times, fields = [], []
    for k in range(1, steps + 1):
        aw = pair.alpha_from_enthalpy(w)
        w[1:-1] += lam * (aw[2:] - 2.0 * aw[1:-1] + aw[:-2])
        flux_sum += (dt / dx) * ((aw[-1] - aw[-2]) - (aw[1] - aw[0]))
        if k % sample_every == 0 or k == steps:
            times.append(k * dt)
            fields.append(pair.temperature_from_enthalpy(w))

    defect = abs(float(np.sum(w)) * dx - total0 - flux_sum)
    # The end cells are pinned by construction, so domain adequacy is judged
    # at the first updated cells: they must still sit on the far-field data.
    u_final = fields[-1]
    if abs(u_final[1] - problem.u_minus) > 1e-12 or abs(u_final[-2] - problem.u_plus) > 1e-12:
        raise SimulationError("front reached the boundary; enlarge half_width")

    m = problem.m
    times = np.array(times)
    positions = np.empty((times.size, m))
    for k_idx, u_field in enumerate(fields):
        for i in range(m):
            positions[k_idx, i] = _level_crossing(centers, u_field,
                                                  cfg.temperatures[i + 1], dx)

    window = times >= grid.end_time / 4.0
    roots = np.sqrt(times[window])
    slopes = np.empty(m)
    residuals = np.empty(m)
    for i in range(m):
        xs = positions[window, i]
        slopes[i] = float(xs @ roots) / float(roots @ roots)
        residuals[i] = float(np.sqrt(np.mean((xs - slopes[i] * roots) ** 2)))
    return FrontTrace(times=times, positions=positions, slopes=slopes,
                      fit_residuals=residuals, conservation_defect=defect,
                      dx=dx, dt=dt, steps=steps)


def fd_gradient(f, x, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with per-coordinate step ``rel_step * (1 + |x_i|)``."""
    x = np.asarray(x, dtype=float)
    g = np.empty(x.size)
    for i in range(x.size):
        h = rel_step * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def fd_hessian(f, x, rel_step: float = 2e-4, richardson: bool = True) -> np.ndarray:
    """Second central differences of a scalar function (symmetric output).

    With ``richardson`` (default) the step-halved estimate is
    extrapolated, pushing the truncation error to fourth order; needed
    because the potentials' fourth derivatives blow up near tight gaps.
    """
    def plain(step):
        size = x.size
        H = np.empty((size, size))
        h = step * (1.0 + np.abs(x))
        f0 = f(x)
        for i in range(size):
            xp = x.copy()
            xm = x.copy()
            xp[i] += h[i]
            xm[i] -= h[i]
            H[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / (h[i] * h[i])
            for j in range(i + 1, size):
                xpp = x.copy(); xpp[i] += h[i]; xpp[j] += h[j]
                xpm = x.copy(); xpm[i] += h[i]; xpm[j] -= h[j]
                xmp = x.copy(); xmp[i] -= h[i]; xmp[j] += h[j]
                xmm = x.copy(); xmm[i] -= h[i]; xmm[j] -= h[j]
                H[i, j] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j])
                H[j, i] = H[i, j]
        return H

    x = np.asarray(x, dtype=float)
    if not richardson:
        return plain(rel_step)
    coarse = plain(rel_step)
    fine = plain(0.5 * rel_step)
    return (4.0 * fine - coarse) / 3.0


def _pdf_over_cdf(z: float) -> float:
    """Density-to-CDF ratio of the scaled Gaussian, safe in the deep left tail.

    For z below the underflow region the Mills-ratio expansion
    ``-z/2 - 1/z`` takes over (relative error O(1/z^4)).
    """
    if z > -38.0:
        return gaussian_pdf(z) / gaussian_cdf(z)
    return -0.5 * z - 1.0 / z


def _residual_1d_single(problem: RiemannProblem1D, x: float) -> float:
    cfg = problem.config
    a0, a1 = cfg.diffusivities
    k0, k1 = cfg.conductivities
    du0 = cfg.temperatures[1] - cfg.temperatures[0]
    du1 = cfg.temperatures[2] - cfg.temperatures[1]
    d1 = cfg.latent_heats[0]
    # the density is even, so both flux terms reduce to left-tail ratios
    return (0.5 * d1 * x
            + k1 * du1 * _pdf_over_cdf(-x / a1) / a1
            - k0 * du0 * _pdf_over_cdf(x / a0) / a0)


def _residual_radial_single(problem: RadialProblem, x: float) -> float:
    cfg = problem.config
    n = problem.dimension
    a0, a1 = cfg.diffusivities
    k0, k1 = cfg.conductivities
    du0 = cfg.temperatures[1] - cfg.temperatures[0]
    d1 = cfg.latent_heats[0]
    return (0.5 * d1 * x
            + k1 * problem.amplitude * radial_kernel_derivative(x / a1, n) / a1
            - k0 * du0 * radial_kernel_derivative(x / a0, n)
            / (a0 * radial_kernel(x / a0, n)))


def bisect_scalar(problem, xtol: float = 1e-12) -> float:
    """Bisection root of the single-front interface condition (m = 1 only).

    Brackets ``[-10 a_max, 10 a_max]`` in 1D and ``[1e-6 a_min,
    50 a_max]`` in the radial case, bisected to width ``xtol``.

    Raises
    ------
    BracketError
        If the residual does not change sign over the bracket (the
        endpoint residuals are reported in the message).
    """
    if problem.m != 1:
        raise ValidationError("bisect_scalar requires m = 1")
    if isinstance(problem, RiemannProblem1D):
        amax = max(problem.config.diffusivities)
        lo, hi = -10.0 * amax, 10.0 * amax
        res = lambda x: _residual_1d_single(problem, x)
    elif isinstance(problem, RadialProblem):
        if problem.extended:
            raise ValidationError("bisect_scalar does not handle the extended front")
        lo = 1e-6 * min(problem.config.diffusivities)
        hi = 50.0 * max(problem.config.diffusivities)
        res = lambda x: _residual_radial_single(problem, x)
    else:
        raise ValidationError(f"unsupported problem type {type(problem).__name__}")

    f_lo = res(lo)
    f_hi = res(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: residuals {f_lo:.3e}, {f_hi:.3e}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = res(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
