import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

import stefansolve as ss

hypothesis_settings.register_profile("deterministic", derandomize=True, deadline=None)
hypothesis_settings.load_profile("deterministic")

# ---------------------------------------------------------------------------
# Fixed regression suite: 12 instances spanning both geometries.
# ---------------------------------------------------------------------------


def suite_instances():
    return [
        ("sym_1d_m1", ss.riemann1d([-1, 0, 1], [1, 1], [1, 1], [0])),
        ("neumann_1d_m1", ss.riemann1d([-1, 0, 2], [1, 0.8], [1.5, 1], [1])),
        ("oned_m1_nolatent", ss.riemann1d([0, 1, 3], [1.2, 0.7], [2, 1], [0])),
        ("oned_m2", ss.riemann1d([-2, -0.5, 0.5, 2], [1, 0.6, 1.3], [1, 2, 0.8], [0.5, 1.5])),
        ("oned_m2_zero_d", ss.riemann1d([-1.5, 0, 1, 2.5], [0.9, 1.1, 0.8], [1.2, 0.7, 1], [0, 0])),
        ("oned_m4", ss.riemann1d([-2, -1, 0, 1, 2, 3], [1, 0.9, 1.1, 0.8, 1.2],
                                 [1, 1.3, 0.7, 1, 1.5], [0.3, 0, 1.0, 0.2])),
        ("radial_n2_m1", ss.radial([0, 1], [1, 1], [1, 1], [0.5], dimension=2, amplitude=1.0)),
        ("radial_n3_m1", ss.radial([0, 1], [1, 0.8], [1.2, 1], [1], dimension=3, amplitude=2.0)),
        ("radial_n3_m1_smallA", ss.radial([0, 1], [1, 1], [1, 1], [0.2],
                                          dimension=3, amplitude=1e-3)),
        ("radial_n2_m2", ss.radial([0, 0.5, 1.5], [1, 0.9, 1.1], [1, 1.2, 0.8],
                                   [0.4, 0.6], dimension=2, amplitude=1.5)),
        ("radial_n3_m3", ss.radial([0, 1, 2, 3], [1, 0.8, 1.2, 0.9], [1, 1.1, 0.9, 1.2],
                                   [0.5, 0.3, 0.8], dimension=3, amplitude=3.0)),
        ("radial_n3_m1_extended", ss.radial([0, 1], [1, 1], [1, 1], [0.7],
                                            dimension=3, amplitude=1.0, d0=1.0)),
    ]


@pytest.fixture(scope="session")
def suite():
    return suite_instances()


@pytest.fixture(scope="session")
def suite_reports(suite):
    """One multistart solve per suite instance, shared across tests."""
    return {name: ss.minimize(problem, ss.SolverSettings(n_starts=16))
            for name, problem in suite}


# ---------------------------------------------------------------------------
# Random feasible point samplers.
# ---------------------------------------------------------------------------


def random_fronts_1d(problem, rng, span=3.0, min_gap=0.0):
    """Sorted uniform fronts; ``min_gap`` (in units of a_max) keeps the
    separations large enough for finite-difference oracles to be valid."""
    amax = max(problem.config.diffusivities)
    for _ in range(1000):
        xi = np.sort(rng.uniform(-span * amax, span * amax, size=problem.m))
        xi += 1e-6 * np.arange(problem.m)
        if problem.m == 1 or np.min(np.diff(xi)) >= min_gap * amax:
            return xi
    return xi + min_gap * amax * np.arange(problem.m)


def random_fronts_radial(problem, rng, lo=0.05, hi=3.0, min_gap=0.0):
    amax = max(problem.config.diffusivities)
    count = problem.n_fronts
    for _ in range(1000):
        xi = np.sort(rng.uniform(lo * amax, hi * amax, size=count))[::-1]
        xi += 1e-6 * (count - 1 - np.arange(count))
        if count == 1 or -np.max(np.diff(xi)) >= min_gap * amax:
            return xi
    return xi + min_gap * amax * (count - 1 - np.arange(count))


def random_fronts(problem, rng):
    if isinstance(problem, ss.RiemannProblem1D):
        return random_fronts_1d(problem, rng)
    return random_fronts_radial(problem, rng)


def sample_sublevel(problem, center, level, count, rng, energy):
    """Feasible points with energy <= level, clustered around ``center``."""
    center = np.asarray(center, dtype=float)
    points = []
    while len(points) < count:
        sigma = np.exp(rng.uniform(np.log(1e-3), np.log(2.0)))
        batch = center + sigma * rng.standard_normal((64, center.size)) * (1.0 + np.abs(center))
        for row in batch:
            try:
                if energy(problem, row) <= level:
                    points.append(row)
            except ss.StefanSolveError:
                continue
            if len(points) >= count:
                break
    return np.array(points)
