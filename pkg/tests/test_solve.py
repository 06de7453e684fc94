import numpy as np
import pytest

import stefansolve as ss
from stefansolve.exceptions import ValidationError
from stefansolve.oracle import bisect_scalar
from stefansolve.solve import AGREEMENT_SPREAD, minimize_path, newton_step


@pytest.fixture(scope="module")
def sym():
    return ss.riemann1d([-1, 0, 1], [1, 1], [1, 1], [0])


@pytest.fixture(scope="module")
def neumann():
    return ss.riemann1d([-1, 0, 2], [1, 0.8], [1.5, 1], [1])


@pytest.fixture(scope="module")
def radial_m2():
    return ss.radial([0, 0.5, 1.5], [1, 0.9, 1.1], [1, 1.2, 0.8], [0.4, 0.6],
                     dimension=2, amplitude=1.5)


class TestSettings:
    def test_defaults(self):
        s = ss.SolverSettings()
        assert s.grad_tol == 1e-12
        assert s.n_starts == 16
        assert 0 < s.tau < 1

    def test_validation(self):
        with pytest.raises(ValidationError):
            ss.SolverSettings(grad_tol=-1)
        with pytest.raises(ValidationError):
            ss.SolverSettings(tau=1.5)
        with pytest.raises(ValidationError):
            ss.SolverSettings(n_starts=0)


class TestInitialGuess:
    def test_default_1d_shape(self):
        p = ss.riemann1d([-2, -1, 0, 1, 2], [1, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0])
        guess = ss.initial_guess(p)
        assert guess.shape == (3,)
        assert np.all(np.diff(guess) > 0)
        assert guess[1] == pytest.approx(0.0, abs=1e-15)

    def test_default_radial_decreasing_positive(self, radial_m2):
        guess = ss.initial_guess(radial_m2)
        assert np.all(guess > 0)
        assert np.all(np.diff(guess) < 0)

    def test_random_guesses_lie_in_box(self, radial_m2):
        level = ss.energy_radial(radial_m2, ss.initial_guess(radial_m2))
        box = ss.coercivity_box_radial(radial_m2, level)
        for k in range(20):
            rng = np.random.default_rng(k)
            xi = ss.initial_guess(radial_m2, "random", rng=rng, level=level)
            assert box.contains(xi)
            assert np.all(np.diff(xi) < 0) and xi[-1] > 0

    def test_random_guesses_lie_in_box_1d(self, neumann):
        level = ss.energy_1d(neumann, ss.initial_guess(neumann))
        box = ss.coercivity_box_1d(neumann, level)
        for k in range(20):
            rng = np.random.default_rng(k)
            xi = ss.initial_guess(neumann, "random", rng=rng, level=level)
            assert box.contains(xi)

    def test_unknown_strategy(self, sym):
        with pytest.raises(ValidationError):
            ss.initial_guess(sym, "annealed")


class TestNewtonStep:
    def test_zero_step_at_critical_point(self, sym):
        xi, info = newton_step(sym, np.array([0.0]))
        assert xi[0] == 0.0
        assert info.step_length == 0.0

    def test_descends_from_nonconvex_point(self):
        p = ss.radial([0, 1], [1, 1], [1, 1], [0.2], dimension=3, amplitude=1e-3)
        from stefansolve.potential_radial import nonconvexity_witness
        y = nonconvexity_witness(p)
        e_before = ss.energy_radial(p, [y])
        xi, info = newton_step(p, np.array([y]))
        assert ss.energy_radial(p, xi) < e_before
        assert not info.newton  # curvature is negative there, so shifted/fallback

    def test_quadratic_convergence_tail(self):
        p = ss.riemann1d([-2, -0.5, 0.5, 2], [1, 0.6, 1.3], [1, 2, 0.8], [0.5, 1.5])
        _, _, _, _, trace, ok = minimize_path(p, ss.initial_guess(p),
                                              ss.SolverSettings(), collect_trace=True)
        assert ok
        tail = [g for g in trace if 0.0 < g <= 1e-2]
        assert len(tail) >= 2
        for g_prev, g_next in zip(tail, tail[1:]):
            assert g_next <= 50.0 * g_prev ** 1.8


class TestMinimize:
    def test_symmetric_instance(self, sym):
        rep = ss.minimize(sym)
        assert abs(rep.fronts[0]) <= 1e-12
        assert rep.hessian_psd_at_solution

    def test_matches_scalar_bisection(self, neumann):
        rep = ss.minimize(neumann, ss.SolverSettings(n_starts=4))
        assert abs(rep.fronts[0] - bisect_scalar(neumann)) <= 1e-10

    def test_radial_multistart_agreement(self, radial_m2):
        rep = ss.minimize(radial_m2, ss.SolverSettings(n_starts=16))
        assert rep.n_converged == 16
        assert rep.spread <= AGREEMENT_SPREAD
        assert rep.all_starts_agree

    def test_monotone_decrease_and_feasible_iterates(self, radial_m2):
        settings = ss.SolverSettings()
        xi = ss.initial_guess(radial_m2)
        energies = [ss.energy_radial(radial_m2, xi)]
        for _ in range(50):
            xi, info = newton_step(radial_m2, xi, settings)
            assert np.all(np.diff(xi) < 0) and xi[-1] > 0
            energies.append(info.energy)
            if info.grad_norm <= settings.grad_tol:
                break
        slack = [8 * np.finfo(float).eps * max(1.0, abs(e)) for e in energies]
        assert all(b <= a + s for a, b, s in zip(energies, energies[1:], slack))
        assert energies[-1] < energies[0]

    def test_deterministic_reports(self, radial_m2):
        s = ss.SolverSettings(seed=7)
        assert ss.minimize(radial_m2, s) == ss.minimize(radial_m2, s)

    def test_gradient_tolerance_met(self, suite_reports):
        for name, rep in suite_reports.items():
            assert rep.grad_norm <= 1e-12, name

    def test_nonconvergence_reported(self, radial_m2):
        with pytest.raises(ss.ConvergenceError) as err:
            ss.minimize(radial_m2, ss.SolverSettings(max_iter=1, n_starts=2))
        assert err.value.best_fronts is not None
