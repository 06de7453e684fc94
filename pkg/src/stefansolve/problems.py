"""Problem instances: phase data, validation, enthalpy pair, JSON schema.

A problem is defined by the ordered transition temperatures ``u_0 < u_1
< ... ``, per-phase diffusivities ``a_i`` and conductivities ``k_i``,
and latent heats ``d_i >= 0`` attached to each transition.  Two
geometries are supported:

* :class:`RiemannProblem1D`: one space dimension with two-sided
  piecewise-constant initial data ``u_minus`` / ``u_plus``.
* :class:`RadialProblem`: radially symmetric in ``n >= 2`` dimensions
  with constant initial data ``u_0`` and a point heat source of
  amplitude ``A`` at the origin.  The innermost "temperature" is
  unbounded, so the temperature list stops at ``u_m``.

The instance JSON schema used by the CLI is::

    {"kind": "riemann1d" | "radial",
     "temperatures": [...], "diffusivities": [...],
     "conductivities": [...], "latent_heats": [...],
     "dimension": n, "amplitude": A, "d0": optional}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DomainError, ValidationError


def _as_floats(values: Sequence[float], name: str) -> tuple[float, ...]:
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a sequence of numbers") from exc
    for v in out:
        if math.isnan(v):
            raise ValidationError(f"{name} contains NaN")
    return out


@dataclass(frozen=True)
class PhaseConfig:
    """Physical data of one instance.

    ``temperatures`` has length m+2 (``u_0 .. u_{m+1}``; the last entry
    may be ``inf`` for radial instances), ``diffusivities`` and
    ``conductivities`` length m+1, ``latent_heats`` length m.
    """

    temperatures: tuple[float, ...]
    diffusivities: tuple[float, ...]
    conductivities: tuple[float, ...]
    latent_heats: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.latent_heats)

    def temperature_steps(self) -> np.ndarray:
        """Differences ``u_{i+1} - u_i`` for i = 0..m."""
        u = np.asarray(self.temperatures)
        return u[1:] - u[:-1]


def validate(config: PhaseConfig) -> PhaseConfig:
    """Check every invariant of a :class:`PhaseConfig`; idempotent.

    Raises
    ------
    ValidationError
        Naming the violated constraint.
    """
    u = config.temperatures
    a = config.diffusivities
    k = config.conductivities
    d = config.latent_heats
    m = len(d)
    if len(u) != m + 2 or len(a) != m + 1 or len(k) != m + 1:
        raise ValidationError(
            "inconsistent lengths: need m+2 temperatures, m+1 diffusivities, "
            f"m+1 conductivities for m={m} latent heats "
            f"(got {len(u)}, {len(a)}, {len(k)})"
        )
    for i in range(len(u) - 1):
        if not u[i] < u[i + 1]:
            raise ValidationError("temperatures not strictly increasing")
    for i, ai in enumerate(a):
        if not (ai > 0.0 and math.isfinite(ai)):
            raise ValidationError(f"diffusivity a_{i} not positive")
    for i, ki in enumerate(k):
        if not (ki > 0.0 and math.isfinite(ki)):
            raise ValidationError(f"conductivity k_{i} not positive")
    for i, di in enumerate(d, start=1):
        if di < 0.0 or not math.isfinite(di):
            raise ValidationError(f"latent heat d_{i} negative")
    return config


def make_config(temperatures, diffusivities, conductivities, latent_heats) -> PhaseConfig:
    return validate(
        PhaseConfig(
            temperatures=_as_floats(temperatures, "temperatures"),
            diffusivities=_as_floats(diffusivities, "diffusivities"),
            conductivities=_as_floats(conductivities, "conductivities"),
            latent_heats=_as_floats(latent_heats, "latent_heats"),
        )
    )


@dataclass(frozen=True)
class RiemannProblem1D:
    """Two-sided piecewise-constant initial data in one dimension."""

    config: PhaseConfig

    def __post_init__(self):
        validate(self.config)
        if self.config.m < 1:
            raise ValidationError("need at least one phase transition (m >= 1)")
        if not math.isfinite(self.config.temperatures[-1]):
            raise ValidationError("riemann1d requires a finite top temperature")

    @property
    def m(self) -> int:
        return self.config.m

    @property
    def u_minus(self) -> float:
        return self.config.temperatures[0]

    @property
    def u_plus(self) -> float:
        return self.config.temperatures[-1]


def unit_sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n (omega_2 = 2*pi, omega_3 = 4*pi)."""
    if n < 2:
        raise DomainError(f"unit_sphere_area: n must be >= 2, got {n}")
    if n == 2:
        return 2.0 * math.pi
    if n == 3:
        return 4.0 * math.pi
    return 2.0 * math.pi * unit_sphere_area(n - 2) / (n - 2)


@dataclass(frozen=True)
class RadialProblem:
    """Point heat source of amplitude ``amplitude`` in ``dimension`` >= 2.

    ``d0 > 0`` switches on the extended-front variant: the ambient
    temperature ``u_0`` is itself a transition with latent heat ``d0``,
    and the front vector gains an extra outermost coordinate.
    """

    config: PhaseConfig
    dimension: int
    amplitude: float
    d0: float = 0.0

    def __post_init__(self):
        validate(self.config)
        if self.config.m < 1:
            raise ValidationError("need at least one phase transition (m >= 1)")
        if not math.isinf(self.config.temperatures[-1]):
            raise ValidationError("radial requires the +inf top-temperature sentinel")
        if not (isinstance(self.dimension, int) and self.dimension >= 2):
            raise ValidationError(f"dimension must be an integer >= 2, got {self.dimension!r}")
        if not (self.amplitude > 0.0 and math.isfinite(self.amplitude)):
            raise ValidationError("amplitude must be positive")
        if self.d0 < 0.0 or not math.isfinite(self.d0):
            raise ValidationError("d0 must be nonnegative")

    @property
    def m(self) -> int:
        return self.config.m

    @property
    def extended(self) -> bool:
        return self.d0 > 0.0

    @property
    def n_fronts(self) -> int:
        return self.m + 1 if self.extended else self.m

    @property
    def omega_n(self) -> float:
        return unit_sphere_area(self.dimension)


def riemann1d(temperatures, diffusivities, conductivities, latent_heats) -> RiemannProblem1D:
    """Build and validate a 1D instance from raw sequences."""
    return RiemannProblem1D(make_config(temperatures, diffusivities, conductivities, latent_heats))


def radial(temperatures, diffusivities, conductivities, latent_heats,
           dimension: int, amplitude: float, d0: float = 0.0) -> RadialProblem:
    """Build and validate a radial instance; ``temperatures`` is ``u_0..u_m``."""
    temps = tuple(_as_floats(temperatures, "temperatures")) + (math.inf,)
    return RadialProblem(
        make_config(temps, diffusivities, conductivities, latent_heats),
        dimension=int(dimension),
        amplitude=float(amplitude),
        d0=float(d0),
    )


class EnthalpyPair:
    """Piecewise-linear flux potential alpha(u) and enthalpy beta(u).

    On each phase interval ``(u_i, u_{i+1})`` the slopes are
    ``alpha' = k_i`` and ``beta' = k_i / a_i^2``; alpha is continuous
    while beta jumps by ``d_i`` at each transition temperature.  Both
    are anchored to 0 at ``u_0+``.  The ratio of alpha-increments to
    beta-increments over any pair of temperatures lies in
    ``(0, max a_i^2]``.
    """

    def __init__(self, config: PhaseConfig):
        validate(config)
        self.config = config
        u = config.temperatures
        a = config.diffusivities
        k = config.conductivities
        d = (0.0,) + config.latent_heats
        m = config.m
        self.breakpoints = u[: m + 1]
        self.alpha_slopes = k
        self.beta_slopes = tuple(k[i] / a[i] ** 2 for i in range(m + 1))
        self.jumps = config.latent_heats
        # Cumulative values at the breakpoints (from below / from above).
        alpha_lo = [0.0]
        beta_lo = [0.0]
        beta_hi = [0.0]
        for i in range(1, m + 1):
            width = u[i] - u[i - 1]
            alpha_lo.append(alpha_lo[-1] + k[i - 1] * width)
            b_minus = beta_hi[-1] + self.beta_slopes[i - 1] * width
            beta_lo.append(b_minus)
            beta_hi.append(b_minus + d[i])
        self._alpha_at = alpha_lo       # alpha(u_i); alpha continuous
        self._beta_minus = beta_lo      # beta(u_i-)
        self._beta_plus = beta_hi       # beta(u_i+)
        # Knot tables for vectorized enthalpy lookups (duplicated knots
        # encode the jump plateaus exactly).
        wk, uk, ak = [0.0], [u[0]], [0.0]
        for i in range(1, m + 1):
            wk.append(beta_lo[i])
            uk.append(u[i])
            ak.append(alpha_lo[i])
            if d[i] > 0.0:
                wk.append(beta_hi[i])
                uk.append(u[i])
                ak.append(alpha_lo[i])
        self._w_knots = np.array(wk)
        self._u_knots = np.array(uk)
        self._alpha_knots = np.array(ak)
        self._top_slope_beta = self.beta_slopes[m]
        self._top_slope_alpha = self.alpha_slopes[m]
        self._u_top = u[m + 1]

    def _phase_of(self, u: float) -> int:
        u0 = self.config.temperatures[0]
        if u < u0:
            raise DomainError(f"temperature {u} below the range start {u0}")
        if math.isfinite(self._u_top) and u > self._u_top:
            raise DomainError(f"temperature {u} above the range end {self._u_top}")
        i = 0
        for j in range(1, self.config.m + 1):
            if u >= self.config.temperatures[j]:
                i = j
        return i

    def alpha(self, u: float) -> float:
        i = self._phase_of(u)
        return self._alpha_at[i] + self.alpha_slopes[i] * (u - self.breakpoints[i])

    def beta(self, u: float) -> float:
        """Value of beta from above at the transition temperatures."""
        i = self._phase_of(u)
        return self._beta_plus[i] + self.beta_slopes[i] * (u - self.breakpoints[i])

    def beta_minus(self, u_index: int) -> float:
        return self._beta_minus[u_index]

    def beta_plus(self, u_index: int) -> float:
        return self._beta_plus[u_index]

    def invert_beta(self, w: float) -> float:
        """Temperature u with ``beta(u-) <= w <= beta(u+)``.

        Inside a jump plateau ``[beta(u_i-), beta(u_i+)]`` the pinned
        transition temperature ``u_i`` is returned.

        Raises
        ------
        DomainError
            If ``w`` lies below the range of beta.
        """
        if w < 0.0:
            raise DomainError(f"enthalpy {w} below the range of beta")
        m = self.config.m
        for i in range(m, 0, -1):
            if w >= self._beta_plus[i]:
                return self.breakpoints[i] + (w - self._beta_plus[i]) / self.beta_slopes[i]
            if w >= self._beta_minus[i]:
                return self.breakpoints[i]
        return self.breakpoints[0] + w / self.beta_slopes[0]

    def temperature_from_enthalpy(self, w: np.ndarray) -> np.ndarray:
        """Vectorized plateau-aware inverse of beta (clamps at the range ends)."""
        w = np.asarray(w, dtype=float)
        core = np.interp(w, self._w_knots, self._u_knots)
        top = w > self._w_knots[-1]
        if np.any(top):
            core = np.where(
                top,
                self._u_knots[-1] + (w - self._w_knots[-1]) / self._top_slope_beta,
                core,
            )
        return core

    def alpha_from_enthalpy(self, w: np.ndarray) -> np.ndarray:
        """Vectorized alpha(invert_beta(w)); piecewise linear in w."""
        w = np.asarray(w, dtype=float)
        core = np.interp(w, self._w_knots, self._alpha_knots)
        top = w > self._w_knots[-1]
        if np.any(top):
            slope = self._top_slope_alpha / self._top_slope_beta
            core = np.where(top, self._alpha_knots[-1] + (w - self._w_knots[-1]) * slope, core)
        return core


def build_enthalpy_pair(config: PhaseConfig) -> EnthalpyPair:
    return EnthalpyPair(config)


# ---------------------------------------------------------------------------
# JSON instance files
# ---------------------------------------------------------------------------

def problem_to_dict(problem) -> dict:
    if isinstance(problem, RiemannProblem1D):
        c = problem.config
        return {
            "kind": "riemann1d",
            "temperatures": list(c.temperatures),
            "diffusivities": list(c.diffusivities),
            "conductivities": list(c.conductivities),
            "latent_heats": list(c.latent_heats),
        }
    if isinstance(problem, RadialProblem):
        c = problem.config
        out = {
            "kind": "radial",
            "temperatures": list(c.temperatures[:-1]),
            "diffusivities": list(c.diffusivities),
            "conductivities": list(c.conductivities),
            "latent_heats": list(c.latent_heats),
            "dimension": problem.dimension,
            "amplitude": problem.amplitude,
        }
        if problem.d0 > 0.0:
            out["d0"] = problem.d0
        return out
    raise ValidationError(f"unknown problem type {type(problem).__name__}")


def problem_from_dict(data: dict):
    if not isinstance(data, dict):
        raise ValidationError("instance document must be a JSON object")
    kind = data.get("kind")
    required = ("temperatures", "diffusivities", "conductivities", "latent_heats")
    missing = [key for key in required if key not in data]
    if missing:
        raise ValidationError(f"instance file missing fields: {', '.join(missing)}")
    if kind == "riemann1d":
        return riemann1d(
            data["temperatures"], data["diffusivities"],
            data["conductivities"], data["latent_heats"],
        )
    if kind == "radial":
        for key in ("dimension", "amplitude"):
            if key not in data:
                raise ValidationError(f"radial instance missing field: {key}")
        return radial(
            data["temperatures"], data["diffusivities"],
            data["conductivities"], data["latent_heats"],
            dimension=data["dimension"], amplitude=data["amplitude"],
            d0=data.get("d0", 0.0),
        )
    raise ValidationError(f"unknown kind {kind!r}; expected 'riemann1d' or 'radial'")


def load_problem(path):
    with open(path, "r", encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))


def dump_problem(problem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem), fh, indent=2, sort_keys=True)
        fh.write("\n")
