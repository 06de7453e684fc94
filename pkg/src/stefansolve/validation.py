"""Input validation helpers shared by the potentials, solver and estimator."""

from __future__ import annotations

import numpy as np

from .exceptions import InfeasibleError, ValidationError

# Gaps smaller than this are treated as a broken ordering rather than a
# finite (astronomically large) potential value.
GAP_FLOOR = 1e-300


def as_front_vector(xi, count: int, name: str = "fronts") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if arr.ndim != 1 or arr.size != count:
        raise ValidationError(f"{name}: expected {count} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    return arr


def check_fronts_1d(xi: np.ndarray) -> np.ndarray:
    """Strictly increasing front coordinates for the 1D cone."""
    if xi.size > 1 and not np.all(np.diff(xi) > 0.0):
        raise InfeasibleError("1D fronts must be strictly increasing")
    return xi


def check_fronts_radial(xi: np.ndarray) -> np.ndarray:
    """Strictly decreasing positive front radii (outermost first)."""
    if not xi[-1] > 0.0:
        raise InfeasibleError("radial fronts must be positive")
    if xi.size > 1 and not np.all(np.diff(xi) < 0.0):
        raise InfeasibleError("radial fronts must be strictly decreasing")
    return xi
