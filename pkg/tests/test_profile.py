import math

import numpy as np
import pytest

import stefansolve as ss
from stefansolve.exceptions import DomainError
from stefansolve.profile import build_profile, flux_at_origin, stefan_residual
from stefansolve.special import gaussian_cdf, laplace_asymptote

from conftest import random_fronts


@pytest.fixture(scope="module")
def onedim():
    problem = ss.riemann1d([-2, -0.5, 0.5, 2], [1, 0.6, 1.3], [1, 2, 0.8], [0.5, 1.5])
    rep = ss.minimize(problem, ss.SolverSettings(n_starts=2))
    return problem, np.array(rep.fronts)


@pytest.fixture(scope="module")
def radial3():
    problem = ss.radial([0, 1, 2], [1, 0.8, 1.2], [1, 1.1, 0.9], [0.5, 0.3],
                        dimension=3, amplitude=2.0)
    rep = ss.minimize(problem, ss.SolverSettings(n_starts=2))
    return problem, np.array(rep.fronts)


@pytest.fixture(scope="module")
def radial2():
    problem = ss.radial([0, 1], [1, 1], [1, 1], [0.5], dimension=2, amplitude=1.0)
    rep = ss.minimize(problem, ss.SolverSettings(n_starts=2))
    return problem, np.array(rep.fronts)


class TestBuild:
    def test_symmetric_profile_is_shifted_cdf(self):
        p = ss.riemann1d([-1, 0, 1], [1, 1], [1, 1], [0])
        prof = build_profile(p, [0.0])
        for x in np.linspace(-4, 4, 33):
            assert prof.value(x) == pytest.approx(-1.0 + 2.0 * gaussian_cdf(x), abs=1e-15)
        assert prof.value(0.0) == 0.0

    def test_continuity_at_fronts(self, onedim, radial3):
        for problem, fronts in (onedim, radial3):
            prof = build_profile(problem, fronts)
            temps = problem.config.temperatures
            levels = ([temps[i + 1] for i in range(problem.m)]
                      if isinstance(problem, ss.RiemannProblem1D)
                      else [temps[i + 1] for i in range(problem.m - 1, -1, -1)])
            asc = np.sort(fronts)
            for front, level in zip(asc, levels):
                assert prof.value(front) == pytest.approx(level, abs=1e-12)
                h = 1e-9 * (1 + abs(front))
                slope = max(abs(prof.derivative(front, -1)), abs(prof.derivative(front, +1)))
                assert abs(prof.value(front - h) - level) <= 2 * slope * h + 1e-13
                assert abs(prof.value(front + h) - level) <= 2 * slope * h + 1e-13

    def test_1d_monotone_and_limits(self, onedim):
        problem, fronts = onedim
        prof = build_profile(problem, fronts)
        xs = np.linspace(-12, 12, 800)
        vals = prof.values(xs)
        assert np.all(np.diff(vals) >= -1e-14)
        assert prof.value(-14.0) == pytest.approx(problem.u_minus, abs=1e-9)
        assert prof.value(16.0) == pytest.approx(problem.u_plus, abs=1e-9)

    def test_radial_monotone_decreasing_to_ambient(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        xs = np.logspace(-3, 1.2, 500)
        vals = prof.values(xs)
        assert np.all(np.diff(vals) <= 1e-12)
        assert prof.value(20.0) == pytest.approx(problem.config.temperatures[0], abs=1e-9)

    def test_radial_source_asymptote(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        u_m = problem.config.temperatures[problem.m]
        a_m = problem.config.diffusivities[problem.m]
        for xi in (1e-4, 1e-6):
            expected = problem.amplitude * laplace_asymptote(xi / a_m, problem.dimension)
            assert (prof.value(xi) - u_m) == pytest.approx(expected, rel=1e-3)

    def test_infeasible_fronts_rejected(self, onedim):
        problem, _ = onedim
        with pytest.raises(ss.StefanSolveError):
            build_profile(problem, [0.5, -0.5])


class TestEvalU:
    def test_scaling_invariance(self, radial3, onedim):
        rng = np.random.default_rng(61)
        for problem, fronts in (onedim, radial3):
            prof = build_profile(problem, fronts)
            for _ in range(50):
                t = rng.uniform(0.1, 4.0)
                x = rng.uniform(0.05, 3.0)
                lam = rng.uniform(0.2, 5.0)
                u1 = prof.eval_u(t, x)
                u2 = prof.eval_u(lam * lam * t, lam * x)
                assert abs(u1 - u2) <= 1e-13 * (1.0 + abs(u1))

    def test_1d_recovers_initial_data(self, onedim):
        problem, fronts = onedim
        prof = build_profile(problem, fronts)
        assert prof.eval_u(1e-10, -1.0) == pytest.approx(problem.u_minus, abs=1e-12)
        assert prof.eval_u(1e-10, 1.0) == pytest.approx(problem.u_plus, abs=1e-12)

    def test_domain_errors(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        with pytest.raises(DomainError):
            prof.eval_u(0.0, 1.0)
        with pytest.raises(DomainError):
            prof.eval_u(1.0, 0.0)


class TestOdeResidual:
    @staticmethod
    def _residual(prof, a, n, xi, h):
        f = prof.value
        vpp = (-f(xi - 2 * h) + 16 * f(xi - h) - 30 * f(xi)
               + 16 * f(xi + h) - f(xi + 2 * h)) / (12 * h * h)
        vp = (f(xi - 2 * h) - 8 * f(xi - h) + 8 * f(xi + h) - f(xi + 2 * h)) / (12 * h)
        if n == 1:
            return a * a * vpp + 0.5 * xi * vp
        return a * a * vpp + (a * a * (n - 1) / xi + 0.5 * xi) * vp

    def test_piecewise_ode_1d(self, onedim):
        problem, fronts = onedim
        prof = build_profile(problem, fronts)
        a = problem.config.diffusivities
        pieces = [(-3.0, fronts[0]), (fronts[0], fronts[1]), (fronts[1], 3.0)]
        for (lo, hi), ai in zip(pieces, a):
            for xi in np.linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 7):
                res = self._residual(prof, ai, 1, xi, 1e-3)
                scale = abs(prof.value(xi)) + abs(xi) + 1.0
                assert abs(res) <= 1e-8 * scale

    def test_piecewise_ode_radial(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        a = problem.config.diffusivities
        n = problem.dimension
        asc = np.sort(fronts)
        pieces = [(0.05, asc[0], a[2]), (asc[0], asc[1], a[1]), (asc[1], 4.0, a[0])]
        for lo, hi, ai in pieces:
            for xi in np.linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 7):
                # near the origin the profile's high derivatives grow like
                # xi^{-n-k}, so the stencil must shrink with xi
                h = min(1e-3 * (1 + xi), 5e-3 * xi)
                res = self._residual(prof, ai, n, xi, h)
                scale = abs(prof.value(xi)) + abs(xi) + 1.0
                assert abs(res) <= 1e-8 * scale


class TestStefanResidual:
    def test_equals_gradient_at_random_points(self, onedim, radial3):
        rng = np.random.default_rng(67)
        for problem, _ in (onedim, radial3):
            grad = ss.grad_1d if isinstance(problem, ss.RiemannProblem1D) else ss.grad_radial
            for _ in range(25):
                xi = random_fronts(problem, rng)
                res = stefan_residual(problem, xi)
                assert np.max(np.abs(res - grad(problem, xi))) <= 1e-12 * (
                    1 + np.max(np.abs(res)))

    def test_small_at_solutions(self, suite_reports, suite):
        problems = dict(suite)
        for name, rep in suite_reports.items():
            res = stefan_residual(problems[name], np.array(rep.fronts))
            assert np.max(np.abs(res)) <= 1e-10, name

    def test_linear_growth_under_perturbation(self, onedim):
        problem, fronts = onedim
        base = stefan_residual(problem, fronts)
        H = ss.hess_1d(problem, fronts)
        eps = 1e-3
        bump = fronts.copy()
        bump[0] += eps
        moved = stefan_residual(problem, bump)
        predicted = base + H[:, 0] * eps
        assert np.max(np.abs(moved - predicted)) <= 5e-2 * eps * np.max(np.abs(H))


class TestFlux:
    def test_closed_form_ratio(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        t = 1.3
        a_m = problem.config.diffusivities[-1]
        limit = (problem.amplitude * problem.omega_n
                 * (a_m * math.sqrt(t)) ** (problem.dimension - 2))
        delta = fronts[-1] * math.sqrt(t) / 10.0
        flux = flux_at_origin(problem, prof, t, delta)
        ratio = math.exp(-delta ** 2 / (4 * a_m * a_m * t))
        assert flux / limit == pytest.approx(ratio, rel=1e-12)

    def test_n2_time_independent(self, radial2):
        # with delta tied to sqrt(t) the n=2 flux value is a constant
        problem, fronts = radial2
        prof = build_profile(problem, fronts)
        values = []
        for t in (0.5, 1.0, 2.0):
            delta = fronts[-1] * math.sqrt(t) / 10.0
            values.append(flux_at_origin(problem, prof, t, delta))
        assert max(values) - min(values) <= 1e-12 * max(values)
        # and the finite-difference route reproduces it to oracle accuracy
        fd = flux_at_origin(problem, prof, 0.5, fronts[-1] * math.sqrt(0.5) / 10.0,
                            numeric=True)
        assert fd == pytest.approx(values[0], rel=1e-6)

    def test_n3_scales_like_sqrt_t(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        f1 = flux_at_origin(problem, prof, 1.0, fronts[-1] / 20.0)
        f4 = flux_at_origin(problem, prof, 4.0, fronts[-1] / 10.0)
        assert f4 / f1 == pytest.approx(2.0, rel=1e-12)

    def test_domain_guard(self, radial3):
        problem, fronts = radial3
        prof = build_profile(problem, fronts)
        with pytest.raises(DomainError):
            flux_at_origin(problem, prof, 1.0, fronts[-1] * 2.0)
