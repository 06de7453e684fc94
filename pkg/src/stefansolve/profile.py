"""Self-similar temperature profiles and their certification residuals.

A solved instance yields a piecewise profile ``v(xi)`` in the
similarity variable ``xi = x / sqrt(t)``; the space-time field is
``u(t, x) = v(x / sqrt(t))``.  Each piece is ``anchor_u + c1 *
(kernel(xi/a) - anchor_value)`` with the scaled Gaussian CDF as kernel
in 1D and the radial kernel in the radial case, anchored at a front so
continuity there is exact by construction.

:func:`stefan_residual` recomputes the interface jump conditions from
one-sided analytic profile derivatives.  It is an independent assembly
path from the potential gradients and must vanish (to tolerance) at a
certified solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, InfeasibleError
from .problems import RadialProblem, RiemannProblem1D
from .special import (
    gaussian_cdf,
    gaussian_cdf_gap,
    gaussian_pdf,
    laplace_asymptote,
    radial_kernel,
    radial_kernel_derivative,
    radial_kernel_gap,
)
from .validation import as_front_vector, check_fronts_1d, check_fronts_radial

# Below this fraction of the innermost diffusivity, radial evaluation
# switches to the Laplace-asymptote branch of the kernel.
_RADIAL_FLOOR = 1e-12


@dataclass(frozen=True)
class ProfilePiece:
    lo: float           # interval in xi (lo may be -inf / 0, hi may be +inf)
    hi: float
    a: float            # diffusivity of the phase
    c1: float           # kernel coefficient (0 for constant pieces)
    anchor_value: float  # kernel value at the anchoring front
    anchor_u: float     # temperature at the anchoring front


@dataclass(frozen=True)
class SelfSimilarProfile:
    """Piecewise self-similar temperature profile.

    ``pieces`` are ordered by increasing xi; piece k covers
    ``(boundaries[k-1], boundaries[k])`` where ``boundaries`` are the
    fronts sorted ascending.
    """

    kind: str                     # "1d" | "radial"
    dimension: int                # 1 for the 1D case
    fronts: tuple[float, ...]     # solver order (ascending 1D, descending radial)
    pieces: tuple[ProfilePiece, ...]
    _asc: tuple[float, ...]       # fronts ascending, for piece lookup

    def _kernel(self, s: float) -> float:
        if self.kind == "1d":
            return gaussian_cdf(s)
        return radial_kernel(s, self.dimension)

    def _kernel_derivative(self, s: float) -> float:
        if self.kind == "1d":
            return gaussian_pdf(s)
        return radial_kernel_derivative(s, self.dimension)

    def _piece_index(self, xi: float, side: int) -> int:
        where = "left" if side < 0 else "right"
        return int(np.searchsorted(self._asc, xi, side=where))

    def value(self, xi: float) -> float:
        """Profile temperature v(xi); xi must be positive in the radial case."""
        if self.kind == "radial":
            if not xi > 0.0:
                raise DomainError("radial profile is defined for xi > 0")
            piece = self.pieces[self._piece_index(xi, -1)]
            s = xi / piece.a
            if piece is self.pieces[0] and s < _RADIAL_FLOOR:
                kernel = laplace_asymptote(s, self.dimension)
            else:
                kernel = self._kernel(s) if piece.c1 != 0.0 else piece.anchor_value
            return piece.anchor_u + piece.c1 * (kernel - piece.anchor_value)
        piece = self.pieces[self._piece_index(xi, +1)]
        return piece.anchor_u + piece.c1 * (self._kernel(xi / piece.a) - piece.anchor_value)

    def values(self, xis) -> np.ndarray:
        return np.array([self.value(float(x)) for x in np.atleast_1d(xis)])

    def derivative(self, xi: float, side: int = +1) -> float:
        """One-sided analytic derivative v'(xi); ``side`` picks the limit."""
        piece = self.pieces[self._piece_index(xi, side)]
        if piece.c1 == 0.0:
            return 0.0
        return piece.c1 * self._kernel_derivative(xi / piece.a) / piece.a

    def eval_u(self, t: float, x: float) -> float:
        """Space-time field u(t, x) = v(x / sqrt(t)).

        Exactly invariant under ``(t, x) -> (lam^2 t, lam x)`` up to
        roundoff in the similarity quotient.
        """
        if not t > 0.0:
            raise DomainError("eval_u requires t > 0")
        if self.kind == "radial":
            x = abs(x)
            if x == 0.0:
                raise DomainError("radial field is singular at x = 0")
        return self.value(x / math.sqrt(t))


def build_profile(problem, fronts) -> SelfSimilarProfile:
    """Reconstruct the piecewise profile for a (solved) front vector."""
    if isinstance(problem, RiemannProblem1D):
        return _build_1d(problem, fronts)
    if isinstance(problem, RadialProblem):
        return _build_radial(problem, fronts)
    raise InfeasibleError(f"unsupported problem type {type(problem).__name__}")


def _build_1d(problem: RiemannProblem1D, fronts) -> SelfSimilarProfile:
    xi = check_fronts_1d(as_front_vector(fronts, problem.m))
    cfg = problem.config
    u = cfg.temperatures
    a = cfg.diffusivities
    m = problem.m
    pieces = []
    for i in range(m + 1):
        du = u[i + 1] - u[i]
        if i == 0:
            gap = gaussian_cdf(xi[0] / a[0])
            anchor_s, anchor_u = xi[0] / a[0], u[1]
            lo, hi = -math.inf, xi[0]
        elif i == m:
            gap = gaussian_cdf(-xi[m - 1] / a[m])
            anchor_s, anchor_u = xi[m - 1] / a[m], u[m]
            lo, hi = xi[m - 1], math.inf
        else:
            gap = gaussian_cdf_gap(xi[i] / a[i], xi[i - 1] / a[i])
            anchor_s, anchor_u = xi[i - 1] / a[i], u[i]
            lo, hi = xi[i - 1], xi[i]
        pieces.append(ProfilePiece(lo=lo, hi=hi, a=a[i], c1=du / gap,
                                   anchor_value=gaussian_cdf(anchor_s),
                                   anchor_u=anchor_u))
    return SelfSimilarProfile(kind="1d", dimension=1,
                              fronts=tuple(float(v) for v in xi),
                              pieces=tuple(pieces),
                              _asc=tuple(float(v) for v in xi))


def _build_radial(problem: RadialProblem, fronts) -> SelfSimilarProfile:
    xi = check_fronts_radial(as_front_vector(fronts, problem.n_fronts))
    cfg = problem.config
    u = cfg.temperatures
    a = cfg.diffusivities
    m = problem.m
    n = problem.dimension
    xi0 = xi[0] if problem.extended else None
    core = xi[1:] if problem.extended else xi  # [xi_1 .. xi_m], descending

    # Ascending pieces: innermost source piece, then segments m-1 .. 0,
    # then (extended only) the constant outer piece.
    pieces = [ProfilePiece(
        lo=0.0, hi=core[m - 1], a=a[m], c1=problem.amplitude,
        anchor_value=radial_kernel(core[m - 1] / a[m], n), anchor_u=u[m],
    )]
    for i in range(m - 1, -1, -1):  # segment i spans (xi_{i+1}, xi_i)
        inner = core[i] / a[i]
        if i == 0:
            if xi0 is None:
                gap = radial_kernel(inner, n)
                anchor_value = 0.0
                hi = math.inf
            else:
                gap = radial_kernel_gap(inner, xi0 / a[0], n)
                anchor_value = radial_kernel(xi0 / a[0], n)
                hi = xi0
            lo = core[0]
        else:
            gap = radial_kernel_gap(inner, core[i - 1] / a[i], n)
            anchor_value = radial_kernel(core[i - 1] / a[i], n)
            lo, hi = core[i], core[i - 1]
        du = u[i + 1] - u[i]
        pieces.append(ProfilePiece(lo=lo, hi=hi, a=a[i], c1=du / gap,
                                   anchor_value=anchor_value, anchor_u=u[i]))
    if problem.extended:
        pieces.append(ProfilePiece(lo=xi0, hi=math.inf, a=a[0], c1=0.0,
                                   anchor_value=0.0, anchor_u=u[0]))
    return SelfSimilarProfile(kind="radial", dimension=n,
                              fronts=tuple(float(v) for v in xi),
                              pieces=tuple(pieces),
                              _asc=tuple(float(v) for v in xi[::-1]))


def stefan_residual(problem, fronts) -> np.ndarray:
    """Interface jump residuals from one-sided profile derivatives.

    Component order matches the front vector.  Vanishes (<= 1e-10) at a
    certified minimizer; grows linearly under front perturbations.
    """
    profile = build_profile(problem, fronts)
    k = problem.config.conductivities
    d = problem.config.latent_heats
    if isinstance(problem, RiemannProblem1D):
        xi = profile.fronts
        res = np.zeros(problem.m)
        for j in range(1, problem.m + 1):
            x = xi[j - 1]
            res[j - 1] = (0.5 * d[j - 1] * x
                          + k[j] * profile.derivative(x, +1)
                          - k[j - 1] * profile.derivative(x, -1))
        return res
    xi = profile.fronts
    off = 1 if problem.extended else 0
    res = np.zeros(problem.n_fronts)
    for j in range(1, problem.m + 1):
        x = xi[off + j - 1]
        res[off + j - 1] = (0.5 * d[j - 1] * x
                            + k[j] * profile.derivative(x, -1)
                            - k[j - 1] * profile.derivative(x, +1))
    if problem.extended:
        x0 = xi[0]
        res[0] = 0.5 * problem.d0 * x0 + k[0] * profile.derivative(x0, -1)
    return res


def flux_at_origin(problem: RadialProblem, profile: SelfSimilarProfile,
                   t: float, delta: float, numeric: bool = False) -> float:
    """Outward heat flux through the sphere of radius ``delta`` at time ``t``.

    Returns ``-oint grad(u) . nu dsigma``, which for the point-source
    profile equals ``A omega_n (a_m sqrt(t))^{n-2} exp(-delta^2 /
    (4 a_m^2 t))`` and tends to the source strength as delta -> 0.
    With ``numeric=True`` the radial derivative is taken by central
    finite differences of ``eval_u`` instead of the analytic piece
    derivative.
    """
    if not t > 0.0:
        raise DomainError("flux_at_origin requires t > 0")
    xi_m = profile.fronts[-1]
    s = delta / math.sqrt(t)
    if not 0.0 < s < xi_m:
        raise DomainError("delta / sqrt(t) must lie inside the innermost phase")
    omega = problem.omega_n
    n = problem.dimension
    if numeric:
        h = 1e-4 * delta
        du = (profile.eval_u(t, delta + h) - profile.eval_u(t, delta - h)) / (2.0 * h)
    else:
        du = profile.derivative(s, -1) / math.sqrt(t)
    return -omega * delta ** (n - 1) * du
