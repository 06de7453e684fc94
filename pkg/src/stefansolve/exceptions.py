"""Semantic exception hierarchy for the solver library."""


class StefanSolveError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(StefanSolveError, ValueError):
    """A problem definition violates its constraints."""


class DomainError(StefanSolveError, ValueError):
    """A function argument lies outside the mathematical domain."""


class InfeasibleError(StefanSolveError, ValueError):
    """A front vector violates the ordering/positivity cone."""


class BracketError(StefanSolveError, RuntimeError):
    """A scalar root finder found no sign change on its bracket."""


class ConvergenceError(StefanSolveError, RuntimeError):
    """The minimizer stopped before reaching the gradient tolerance.

    Carries the best iterate seen so far in ``best_fronts`` / ``best_grad_norm``
    so callers can inspect or restart.
    """

    def __init__(self, message, best_fronts=None, best_grad_norm=None):
        super().__init__(message)
        self.best_fronts = best_fronts
        self.best_grad_norm = best_grad_norm


class SimulationError(StefanSolveError, RuntimeError):
    """The finite-difference oracle hit an invalid regime (CFL, boundaries)."""
