"""The 1D front potential, its exact derivatives, and sub-level boxes.

For fronts ``xi_1 < ... < xi_m`` the potential is

    E(xi) = - sum_i kappa_i * ln(gap_i) + sum_i d_i xi_i^2 / 4,

where ``kappa_i = k_i (u_{i+1} - u_i)`` and ``gap_i`` is the increment
of the scaled Gaussian CDF across segment i (with the conventions
CDF(-inf) = 0, CDF(+inf) = 1 closing the two unbounded segments).  Its
critical points are exactly the front vectors satisfying all the
interface jump conditions, E is everywhere positive, strictly convex,
and coercive, so the solver target is the unique minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, InfeasibleError
from .problems import RiemannProblem1D
from .special import gaussian_cdf, gaussian_cdf_gap, gaussian_pdf, gaussian_quantile
from .validation import GAP_FLOOR, as_front_vector, check_fronts_1d


def _segment_data(problem: RiemannProblem1D, xi: np.ndarray):
    """Per-segment scaled endpoints, CDF gaps and densities.

    Segment i = 0..m spans (xi_i, xi_{i+1}) with xi_0 = -inf and
    xi_{m+1} = +inf.  Returns lists indexed by segment: (left scaled
    coordinate or None, right scaled coordinate or None, gap, kappa, a).
    """
    cfg = problem.config
    m = problem.m
    a = cfg.diffusivities
    kappa = [cfg.conductivities[i] * (cfg.temperatures[i + 1] - cfg.temperatures[i])
             for i in range(m + 1)]
    segs = []
    for i in range(m + 1):
        left = xi[i - 1] / a[i] if i >= 1 else None
        right = xi[i] / a[i] if i < m else None
        if left is None:
            gap = gaussian_cdf(right)
        elif right is None:
            gap = gaussian_cdf(-left)
        else:
            gap = gaussian_cdf_gap(right, left)
        if not gap > GAP_FLOOR:
            raise InfeasibleError(f"degenerate CDF gap in segment {i}")
        segs.append((left, right, gap, kappa[i], a[i]))
    return segs


def energy_1d(problem: RiemannProblem1D, xi) -> float:
    """Potential value; positive at every feasible point.

    Raises
    ------
    InfeasibleError
        If the ordering is violated or a gap underflows.
    """
    xi = check_fronts_1d(as_front_vector(xi, problem.m))
    total = 0.0
    for _, _, gap, kappa, _ in _segment_data(problem, xi):
        total -= kappa * math.log(gap)
    d = problem.config.latent_heats
    for i in range(problem.m):
        total += 0.25 * d[i] * xi[i] * xi[i]
    return total


def grad_1d(problem: RiemannProblem1D, xi) -> np.ndarray:
    """Exact gradient; component i is the i-th interface jump residual."""
    xi = check_fronts_1d(as_front_vector(xi, problem.m))
    m = problem.m
    segs = _segment_data(problem, xi)
    d = problem.config.latent_heats
    g = np.zeros(m)
    for i in range(m):
        # xi_{i+1} in 1-based numbering: right end of segment i,
        # left end of segment i+1.
        left_seg = segs[i]
        right_seg = segs[i + 1]
        _, r, gap_l, kappa_l, a_l = left_seg
        l, _, gap_r, kappa_r, a_r = right_seg
        g[i] = (0.5 * d[i] * xi[i]
                + kappa_r * gaussian_pdf(l) / (a_r * gap_r)
                - kappa_l * gaussian_pdf(r) / (a_l * gap_l))
    return g


def hess_1d(problem: RiemannProblem1D, xi) -> np.ndarray:
    """Exact Hessian: symmetric tridiagonal, positive definite on the cone.

    Assembled segment by segment from the second derivatives of
    ``-ln(gap)`` in the scaled variables, divided by the segment
    diffusivity squared, plus ``d_i / 2`` on the diagonal.
    """
    xi = check_fronts_1d(as_front_vector(xi, problem.m))
    m = problem.m
    segs = _segment_data(problem, xi)
    d = problem.config.latent_heats
    H = np.zeros((m, m))
    for i in range(m):
        H[i, i] += 0.5 * d[i]
    for idx, (left, right, gap, kappa, a) in enumerate(segs):
        scale = kappa / (a * a * gap * gap)
        pl = gaussian_pdf(left) if left is not None else 0.0
        pr = gaussian_pdf(right) if right is not None else 0.0
        if right is not None:
            # d^2/dright^2 of -ln gap: (pdf(r)^2 - pdf'(r) gap) / gap^2,
            # with pdf'(r) = -r/2 * pdf(r).
            H[idx, idx] += scale * (pr * pr + 0.5 * right * pr * gap)
        if left is not None:
            H[idx - 1, idx - 1] += scale * (pl * pl - 0.5 * left * pl * gap)
        if left is not None and right is not None:
            H[idx - 1, idx] -= scale * pl * pr
            H[idx, idx - 1] -= scale * pl * pr
    return H


@dataclass(frozen=True)
class CoercivityBox1D:
    """Compact box certified to contain the sub-level set at ``level``.

    ``delta1`` is +inf for m = 1 (no interior gaps to bound).
    """

    level: float
    r1: float
    r2: float
    delta1: float

    def contains(self, xi) -> bool:
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if xi[0] < self.r1 or xi[-1] > self.r2:
            return False
        if xi.size > 1 and math.isfinite(self.delta1):
            if np.any(np.diff(xi) < self.delta1):
                return False
        return True


def coercivity_box_1d(problem: RiemannProblem1D, c: float) -> CoercivityBox1D:
    """Containment box for the sub-level set {E <= c}.

    Bounds: ``xi_1 >= r1 = a_0 * Q(exp(-c / kappa_0))`` and
    ``xi_m <= r2 = -a_m * Q(exp(-c / kappa_m))`` with Q the CDF
    quantile, plus a minimal interior gap from the unit Lipschitz bound
    of the CDF.
    """
    if not c > 0.0:
        raise DomainError("coercivity level must be positive")
    cfg = problem.config
    m = problem.m
    steps = [cfg.temperatures[i + 1] - cfg.temperatures[i] for i in range(m + 1)]
    kappa0 = cfg.conductivities[0] * steps[0]
    kappam = cfg.conductivities[m] * steps[m]
    r1 = cfg.diffusivities[0] * gaussian_quantile(math.exp(-c / kappa0))
    r2 = -cfg.diffusivities[m] * gaussian_quantile(math.exp(-c / kappam))
    if m >= 2:
        alpha = min(cfg.conductivities[i] * steps[i] for i in range(1, m))
        delta1 = math.exp(-c / alpha) * min(cfg.diffusivities)
    else:
        delta1 = math.inf
    return CoercivityBox1D(level=c, r1=r1, r2=r2, delta1=delta1)
