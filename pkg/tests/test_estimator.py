import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import stefansolve as ss
from stefansolve import StefanSolver


@pytest.fixture(scope="module")
def fitted():
    problem = ss.riemann1d([-1, 0, 2], [1, 0.8], [1.5, 1], [1])
    return problem, StefanSolver(n_starts=4).fit(problem)


class TestSklearnContract:
    def test_get_params_round_trip(self):
        est = StefanSolver(grad_tol=1e-10, seed=3)
        params = est.get_params()
        assert params["grad_tol"] == 1e-10
        assert params["seed"] == 3
        est2 = StefanSolver().set_params(**params)
        assert est2.get_params() == params

    def test_clone(self):
        est = StefanSolver(n_starts=5, seed=9)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_not_fitted_error(self):
        with pytest.raises(NotFittedError):
            StefanSolver().predict([[1.0, 0.5]])

    def test_repr_is_informative(self):
        assert "StefanSolver" in repr(StefanSolver())


class TestFit:
    def test_attributes(self, fitted):
        problem, est = fitted
        assert est.fronts_.shape == (1,)
        assert est.grad_norm_ <= 1e-12
        assert np.max(np.abs(est.residuals_)) <= 1e-10
        assert est.report_.n_converged == 4
        assert est.energy_ == est.report_.energy

    def test_fit_symmetric(self):
        est = StefanSolver(n_starts=2).fit(
            ss.riemann1d([-1, 0, 1], [1, 1], [1, 1], [0]))
        assert abs(est.fronts_[0]) <= 1e-12

    def test_fit_from_dict(self):
        doc = {"kind": "radial", "temperatures": [0, 1],
               "diffusivities": [1, 0.8], "conductivities": [1.2, 1],
               "latent_heats": [1], "dimension": 3, "amplitude": 2.0}
        est = StefanSolver(n_starts=2).fit(doc)
        assert isinstance(est.problem_, ss.RadialProblem)
        assert est.fronts_[0] > 0

    def test_fit_rejects_junk(self):
        with pytest.raises(TypeError):
            StefanSolver().fit([1, 2, 3])


class TestPredict:
    def test_matches_profile(self, fitted):
        problem, est = fitted
        pts = np.array([[1.0, -0.5], [2.0, 0.3], [0.25, 1.0]])
        out = est.predict(pts)
        expected = [est.profile_.eval_u(t, x) for t, x in pts]
        assert np.allclose(out, expected, rtol=0, atol=0)

    def test_single_point(self, fitted):
        _, est = fitted
        assert est.predict([1.0, 0.0]).shape == (1,)

    def test_bad_shape(self, fitted):
        _, est = fitted
        with pytest.raises(ValueError):
            est.predict(np.zeros((3, 4)))

    def test_initial_data_limits(self, fitted):
        problem, est = fitted
        assert est.predict([[1e-9, -1.0]])[0] == pytest.approx(problem.u_minus, abs=1e-12)
        assert est.predict([[1e-9, 1.0]])[0] == pytest.approx(problem.u_plus, abs=1e-12)
