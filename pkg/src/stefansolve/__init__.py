"""Self-similar solutions of multi-phase Stefan problems.

The free-boundary coordinates of a self-similar solution are the unique
minimizer of an explicit coercive potential; this package evaluates
those potentials and their exact derivatives, minimizes them with a
damped feasible Newton method, reconstructs the temperature field, and
verifies everything against independent oracles (quadrature, scalar
bisection, and a conservative enthalpy-method simulation).
"""

__version__ = "0.1.0"

from .estimator import StefanSolver
from .exceptions import (
    BracketError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    SimulationError,
    StefanSolveError,
    ValidationError,
)
from .potential_1d import CoercivityBox1D, coercivity_box_1d, energy_1d, grad_1d, hess_1d
from .potential_radial import (
    CoercivityBoxRadial,
    coercivity_box_radial,
    energy_radial,
    grad_radial,
    hess_radial,
    lower_bound_f,
    lower_bound_min,
)
from .problems import (
    EnthalpyPair,
    PhaseConfig,
    RadialProblem,
    RiemannProblem1D,
    build_enthalpy_pair,
    dump_problem,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    radial,
    riemann1d,
    unit_sphere_area,
    validate,
)
from .profile import SelfSimilarProfile, build_profile, flux_at_origin, stefan_residual
from .solve import (
    SolveReport,
    SolverSettings,
    initial_guess,
    minimize,
    minimize_path,
    newton_step,
)

__all__ = [
    "BracketError",
    "CoercivityBox1D",
    "CoercivityBoxRadial",
    "ConvergenceError",
    "DomainError",
    "EnthalpyPair",
    "InfeasibleError",
    "PhaseConfig",
    "RadialProblem",
    "RiemannProblem1D",
    "SelfSimilarProfile",
    "SimulationError",
    "SolveReport",
    "SolverSettings",
    "StefanSolveError",
    "StefanSolver",
    "ValidationError",
    "build_enthalpy_pair",
    "build_profile",
    "coercivity_box_1d",
    "coercivity_box_radial",
    "dump_problem",
    "energy_1d",
    "energy_radial",
    "flux_at_origin",
    "grad_1d",
    "grad_radial",
    "hess_1d",
    "hess_radial",
    "initial_guess",
    "load_problem",
    "lower_bound_f",
    "lower_bound_min",
    "minimize",
    "minimize_path",
    "newton_step",
    "problem_from_dict",
    "problem_to_dict",
    "radial",
    "riemann1d",
    "stefan_residual",
    "unit_sphere_area",
    "validate",
]
