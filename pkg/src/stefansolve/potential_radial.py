"""The radial front potential, its exact derivatives, and sub-level boxes.

Fronts are radii stored outermost-first: ``xi_1 > xi_2 > ... > xi_m >
0``.  For a point-source instance the potential is

    E(xi) = - sum_{i<m} kappa_i * ln(gap_i)
            + k_m * A * K(xi_m / a_m)
            + sum_i d_i xi_i^2 / 4,

where ``K`` is the radial kernel, ``gap_i = K(xi_{i+1}/a_i) -
K(xi_i/a_i)`` (the outermost gap closes with K(+inf) = 0), and
``kappa_i = k_i (u_{i+1} - u_i)``.  E is coercive and bounded below by
``min_y f(y)`` (see :func:`lower_bound_f`) but, unlike the 1D
potential, it is not convex; the solver pairs it with a Levenberg
fallback for that reason.

The extended-front variant (``problem.d0 > 0``) prepends a finite
outermost radius ``xi_0`` to the front vector: the outermost gap
becomes ``K(xi_1/a_0) - K(xi_0/a_0)`` and the quadratic term gains
``d_0 xi_0^2 / 4``.  Nothing else changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, InfeasibleError
from .problems import RadialProblem
from .special import (
    laplace_asymptote,
    radial_kernel,
    radial_kernel_derivative,
    radial_kernel_gap,
    radial_kernel_inverse,
)
from .validation import GAP_FLOOR, as_front_vector, check_fronts_radial


def _kappas(problem: RadialProblem) -> list[float]:
    cfg = problem.config
    return [cfg.conductivities[i] * (cfg.temperatures[i + 1] - cfg.temperatures[i])
            for i in range(problem.m)]  # i = 0..m-1; the source replaces kappa_m


def _split_fronts(problem: RadialProblem, xi) -> tuple[float | None, np.ndarray]:
    """Return (xi_0 or None, [xi_1..xi_m]) from the stored front vector."""
    xi = check_fronts_radial(as_front_vector(xi, problem.n_fronts))
    if problem.extended:
        return xi[0], xi[1:]
    return None, xi


def _segment_gaps(problem: RadialProblem, xi0: float | None, core: np.ndarray) -> list[float]:
    """Kernel gaps for segments i = 0..m-1 (between xi_{i+1} and xi_i)."""
    n = problem.dimension
    a = problem.config.diffusivities
    m = problem.m
    gaps = []
    for i in range(m):
        inner = core[i] / a[i]
        if i == 0:
            if xi0 is None:
                gap = radial_kernel(inner, n)
            else:
                gap = radial_kernel_gap(inner, xi0 / a[0], n)
        else:
            gap = radial_kernel_gap(inner, core[i - 1] / a[i], n)
        if not gap > GAP_FLOOR:
            raise InfeasibleError(f"degenerate kernel gap in segment {i}")
        gaps.append(gap)
    return gaps


def energy_radial(problem: RadialProblem, xi) -> float:
    """Potential value; bounded below by ``min_y lower_bound_f``."""
    xi0, core = _split_fronts(problem, xi)
    cfg = problem.config
    m = problem.m
    kappas = _kappas(problem)
    gaps = _segment_gaps(problem, xi0, core)
    total = 0.0
    for i in range(m):
        total -= kappas[i] * math.log(gaps[i])
    total += (cfg.conductivities[m] * problem.amplitude
              * radial_kernel(core[m - 1] / cfg.diffusivities[m], problem.dimension))
    d = cfg.latent_heats
    for i in range(m):
        total += 0.25 * d[i] * core[i] * core[i]
    if xi0 is not None:
        total += 0.25 * problem.d0 * xi0 * xi0
    return total


def grad_radial(problem: RadialProblem, xi) -> np.ndarray:
    """Exact gradient, ordered like the front vector (xi_0 first if present)."""
    xi0, core = _split_fronts(problem, xi)
    cfg = problem.config
    n = problem.dimension
    a = cfg.diffusivities
    m = problem.m
    kappas = _kappas(problem)
    gaps = _segment_gaps(problem, xi0, core)
    d = cfg.latent_heats
    g_core = np.zeros(m)
    for j in range(1, m + 1):  # 1-based front subscript; stored at core[j-1]
        val = 0.5 * d[j - 1] * core[j - 1]
        if j < m:
            # inner end of segment j
            val += (kappas[j] * radial_kernel_derivative(core[j - 1] / a[j], n)
                    / (a[j] * gaps[j]))
        else:
            val += (cfg.conductivities[m] * problem.amplitude
                    * radial_kernel_derivative(core[m - 1] / a[m], n) / a[m])
        # outer end of segment j-1
        val -= (kappas[j - 1] * radial_kernel_derivative(core[j - 1] / a[j - 1], n)
                / (a[j - 1] * gaps[j - 1]))
        g_core[j - 1] = val
    if xi0 is None:
        return g_core
    g0 = (0.5 * problem.d0 * xi0
          + kappas[0] * radial_kernel_derivative(xi0 / a[0], n) / (a[0] * gaps[0]))
    return np.concatenate(([g0], g_core))


def _kernel_second(y: float, n: int) -> float:
    # K''(y) = e^{-y^2/4} ((n-1) y^{-n} + y^{2-n} / 2) > 0
    expo = -0.25 * y * y
    if expo < -745.0:
        return 0.0
    return math.exp(expo) * ((n - 1) * y ** (-n) + 0.5 * y ** (2 - n))


def hess_radial(problem: RadialProblem, xi) -> np.ndarray:
    """Exact Hessian: symmetric tridiagonal, not positive definite in general."""
    xi0, core = _split_fronts(problem, xi)
    cfg = problem.config
    n = problem.dimension
    a = cfg.diffusivities
    m = problem.m
    kappas = _kappas(problem)
    gaps = _segment_gaps(problem, xi0, core)
    d = cfg.latent_heats

    size = problem.n_fronts
    off = 1 if xi0 is not None else 0  # row of xi_1 in the Hessian
    H = np.zeros((size, size))
    for i in range(m):
        H[off + i, off + i] += 0.5 * d[i]
    if xi0 is not None:
        H[0, 0] += 0.5 * problem.d0

    # Segment log terms: seg_i = -kappa_i ln(K(p) - K(q)) with
    # p = xi_{i+1}/a_i (inner), q = xi_i/a_i (outer; absent for i=0
    # unless the extended front supplies it).
    for i in range(m):
        gap = gaps[i]
        scale = kappas[i] / (a[i] * a[i] * gap * gap)
        p = core[i] / a[i]
        dKp = radial_kernel_derivative(p, n)
        ddKp = _kernel_second(p, n)
        row_p = off + i  # front xi_{i+1}
        if i == 0:
            q = xi0 / a[0] if xi0 is not None else None
            row_q = 0 if xi0 is not None else None
        else:
            q = core[i - 1] / a[i]
            row_q = off + i - 1
        # d^2/dp^2 of -ln gap = (K'(p)^2 - K''(p) gap) / gap^2
        H[row_p, row_p] += scale * (dKp * dKp - ddKp * gap)
        if q is not None:
            dKq = radial_kernel_derivative(q, n)
            ddKq = _kernel_second(q, n)
            H[row_q, row_q] += scale * (dKq * dKq + ddKq * gap)
            H[row_p, row_q] -= scale * dKp * dKq
            H[row_q, row_p] -= scale * dKp * dKq

    # Point-source term k_m A K(xi_m / a_m).
    pm = core[m - 1] / a[m]
    H[off + m - 1, off + m - 1] += (cfg.conductivities[m] * problem.amplitude
                                    * _kernel_second(pm, n) / (a[m] * a[m]))
    return H


def lower_bound_f(problem: RadialProblem, y: float) -> float:
    """Scalar lower-bound profile: E(xi) >= f(xi_m) for every feasible xi.

    ``f(y) = - sum_{i<m} kappa_i ln K(y/a_i) + k_m A K(y/a_m)``; it
    blows up at both ends of (0, inf), so its minimum bounds E below.
    """
    if not y > 0.0:
        raise DomainError("lower_bound_f: y must be positive")
    cfg = problem.config
    n = problem.dimension
    total = 0.0
    for i, kappa in enumerate(_kappas(problem)):
        kernel = radial_kernel(y / cfg.diffusivities[i], n)
        if kernel <= 0.0:  # underflow far in the tail: the log term dominates
            return math.inf
        total -= kappa * math.log(kernel)
    total += (cfg.conductivities[problem.m] * problem.amplitude
              * radial_kernel(y / cfg.diffusivities[problem.m], n))
    return total


_SCAN_LO = 1e-8
_SCAN_HI = 1e3
_SCAN_PER_DECADE = 512
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=128)
def _grid_scan(problem: RadialProblem) -> tuple[np.ndarray, np.ndarray]:
    """Geometric grid over the scan range with f evaluated on it (cached)."""
    amin = min(problem.config.diffusivities)
    decades = math.log10(_SCAN_HI / _SCAN_LO)
    count = int(decades * _SCAN_PER_DECADE) + 1
    grid = amin * np.logspace(math.log10(_SCAN_LO), math.log10(_SCAN_HI), count)
    vals = np.array([lower_bound_f(problem, y) for y in grid])
    return grid, vals


@lru_cache(maxsize=128)
def lower_bound_min(problem: RadialProblem) -> tuple[float, float]:
    """Global minimum of :func:`lower_bound_f`: returns (argmin, value).

    Geometric grid scan followed by golden-section refinement.
    """
    grid, vals = _grid_scan(problem)
    j = int(np.argmin(vals))
    lo = grid[max(j - 1, 0)]
    hi = grid[min(j + 1, grid.size - 1)]
    # Golden-section on [lo, hi].
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = lower_bound_f(problem, x1)
    f2 = lower_bound_f(problem, x2)
    for _ in range(200):
        if hi - lo <= 1e-13 * (1.0 + abs(lo)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = lower_bound_f(problem, x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = lower_bound_f(problem, x2)
    y_star = 0.5 * (lo + hi)
    return y_star, lower_bound_f(problem, y_star)


@dataclass(frozen=True)
class CoercivityBoxRadial:
    """Compact box certified to contain the radial sub-level set.

    ``q``, ``lipschitz`` and the interior gap ``delta`` are only
    meaningful for m >= 2; for m = 1 the gap carries the +inf sentinel.
    """

    level: float
    r1: float
    r2: float
    delta: float
    q: float | None = None
    lipschitz: float | None = None

    def contains(self, xi) -> bool:
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if xi[-1] < self.r1 or xi[0] > self.r2:
            return False
        if xi.size > 1 and math.isfinite(self.delta):
            if np.any(-np.diff(xi) < self.delta):
                return False
        return True


def coercivity_box_radial(problem: RadialProblem, c: float) -> CoercivityBoxRadial | None:
    """Containment box for {E <= c}; ``None`` marks an empty sub-level set.

    ``r1`` is the certified inner radius below which the lower-bound
    profile exceeds ``c`` (grid scan plus bisection onto f = c), ``r2``
    follows from inverting the kernel on the outermost segment bound,
    and the interior gap comes from the kernel's Lipschitz constant on
    ``[r1 / max a_i, inf)``.
    """
    _, e0 = lower_bound_min(problem)
    if c < e0:
        return None
    cfg = problem.config
    m = problem.m
    n = problem.dimension
    kappas = _kappas(problem)
    grid, vals = _grid_scan(problem)
    # First grid point where f dips to or below c; certified r1 by bisection.
    hits = np.nonzero(vals <= c)[0]
    idx = int(hits[0]) if hits.size else None
    if idx is None:  # c below the grid minimum but above e0: fall back
        r1 = lower_bound_min(problem)[0]
    elif idx == 0:
        r1 = grid[0]
    else:
        lo, hi = grid[idx - 1], grid[idx]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if lower_bound_f(problem, mid) > c:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-14 * (1.0 + lo):
                break
        r1 = 0.5 * (lo + hi)

    big_m = max(kappas[i] * math.log(radial_kernel(r1 / cfg.diffusivities[i], n))
                for i in range(m))
    c1 = c + (m - 1) * big_m
    r2 = cfg.diffusivities[0] * radial_kernel_inverse(math.exp(-c1 / kappas[0]), n)
    if m >= 2:
        q = min(math.exp(-c1 / kappas[i]) for i in range(1, m))
        alpha = r1 / max(cfg.diffusivities[i] for i in range(1, m))
        lipschitz = alpha ** (1 - n)
        delta = q / lipschitz * min(cfg.diffusivities[i] for i in range(1, m))
        return CoercivityBoxRadial(level=c, r1=r1, r2=r2, delta=delta,
                                   q=q, lipschitz=lipschitz)
    return CoercivityBoxRadial(level=c, r1=r1, r2=r2, delta=math.inf)


def nonconvexity_witness(problem: RadialProblem, samples: int = 2000) -> float | None:
    """Scan for a front radius where the m = 1 potential has negative curvature.

    Returns a radius with ``hess < 0`` or None if the scan finds none.
    Only meaningful for plain m = 1 instances.
    """
    if problem.m != 1 or problem.extended:
        raise DomainError("nonconvexity scan is defined for plain m = 1 instances")
    amax = max(problem.config.diffusivities)
    for y in np.logspace(-4, 1.5, samples) * amax:
        if hess_radial(problem, [y])[0, 0] < 0.0:
            return float(y)
    return None
