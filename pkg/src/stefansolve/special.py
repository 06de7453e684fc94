"""Scaled Gaussian CDF and radial heat-kernel integrals.

Every downstream computation in this package reduces to two function
families evaluated here:

* ``gaussian_cdf(x)``: the cumulative integral ``(1/(2*sqrt(pi))) *
  int_{-inf}^{x} exp(-s^2/4) ds``, i.e. the CDF of a centered Gaussian
  with variance 2.  Strictly increasing from 0 to 1, value 1/2 at 0.
* ``radial_kernel(y, n)``: the tail integral ``int_y^{+inf} s^{1-n}
  exp(-s^2/4) ds`` for integer dimension ``n >= 2``.  Strictly
  decreasing on (0, inf), blows up at 0 like the Laplace fundamental
  solution profile (see :func:`laplace_asymptote`) and decays like
  ``2 y^{-n} exp(-y^2/4)`` at infinity.

Both are implemented in-module (no dependency beyond ``math``) with
accuracy targets of 1e-15 absolute for the CDF family and 1e-12
relative for the kernel family.  The error function behind the CDF uses
a positive-term Maclaurin series for small arguments and a continued
fraction for the complement otherwise; the kernel uses the upper
incomplete gamma continued fraction for ``y^2/4 >= 1/2`` and an exact
integration-by-parts reduction to ``erfc`` / ``E_1`` base cases below
that.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import math

from .exceptions import DomainError

_SQRT_PI = math.sqrt(math.pi)
_EULER_GAMMA = 0.5772156649015328606065
_TINY = 1e-300
_CF_EPS = 1e-17
# Series/continued-fraction crossover for erf, in the erf argument.
_ERF_SPLIT = 2.0
# Below this value of y^2/4 the gamma continued fraction converges too
# slowly; switch to the exact reduction onto erfc / E_1.
_GAMMA_CF_FLOOR = 0.5


def _erf_series(z: float) -> float:
    # erf(z) = 2 z e^{-z^2}/sqrt(pi) * sum_k (2 z^2)^k / (1*3*...*(2k+1)),
    # all terms positive, so no cancellation for z in [0, 2].
    z2 = z * z
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= 2.0 * z2 / (2.0 * k + 1.0)
        total += term
        if term <= 1e-17 * total or k > 200:
            break
    return 2.0 * z * math.exp(-z2) / _SQRT_PI * total


def _erfc_cf(z: float) -> float:
    # erfc(z) = e^{-z^2}/sqrt(pi) / (z + (1/2)/(z + (2/2)/(z + (3/2)/(...))))
    # evaluated by modified Lentz; converges fast for z >= 2.
    f = z
    c = f
    d = 0.0
    for k in range(1, 500):
        a = 0.5 * k
        d = z + a * d
        if abs(d) < _TINY:
            d = _TINY
        d = 1.0 / d
        c = z + a / c
        if abs(c) < _TINY:
            c = _TINY
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    expo = -z * z
    if expo < -745.0:
        return 0.0
    return math.exp(expo) / (_SQRT_PI * f)


def _erf(z: float) -> float:
    az = abs(z)
    if az <= _ERF_SPLIT:
        v = _erf_series(az)
    else:
        v = 1.0 - _erfc_cf(az)
    return v if z >= 0.0 else -v


def _erfc(z: float) -> float:
    if z > _ERF_SPLIT:
        return _erfc_cf(z)
    return 1.0 - _erf(z)


def gaussian_cdf(x: float) -> float:
    """CDF value in (0, 1); absolute error below 1e-15.

    Computed as ``(1 + erf(x/2)) / 2`` for x <= 0 and as
    ``1 - erfc(x/2)/2`` style complements for x > 0 so that the exact
    reflection identity ``gaussian_cdf(x) + gaussian_cdf(-x) == 1``
    holds to the last bit.
    """
    if math.isnan(x):
        raise DomainError("gaussian_cdf: argument is NaN")
    z = 0.5 * x
    if z >= 0.0:
        return 1.0 - 0.5 * _erfc(z)
    return 0.5 * _erfc(-z)


def gaussian_pdf(x: float) -> float:
    """Derivative of :func:`gaussian_cdf`: ``exp(-x^2/4) / (2*sqrt(pi))``."""
    if math.isnan(x):
        raise DomainError("gaussian_pdf: argument is NaN")
    expo = -0.25 * x * x
    if expo < -745.0:
        return 0.0
    return math.exp(expo) / (2.0 * _SQRT_PI)


def gaussian_quantile(p: float) -> float:
    """Inverse of :func:`gaussian_cdf` on (0, 1).

    Safeguarded Newton iteration inside an expanding bisection bracket;
    the returned ``x`` satisfies ``|gaussian_cdf(x) - p| <= 1e-13``.

    Raises
    ------
    DomainError
        If ``p`` is not strictly inside (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"gaussian_quantile: p={p!r} outside (0, 1)")
    if p == 0.5:
        return 0.0
    # Bracket by doubling away from zero on the correct side.
    if p > 0.5:
        lo, hi = 0.0, 2.0
        while gaussian_cdf(hi) < p:
            lo = hi
            hi *= 2.0
    else:
        lo, hi = -2.0, 0.0
        while gaussian_cdf(lo) > p:
            hi = lo
            lo *= 2.0
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = gaussian_cdf(x) - p
        if fx == 0.0:
            return x
        if fx > 0.0:
            hi = x
        else:
            lo = x
        dfx = gaussian_pdf(x)
        if dfx > _TINY:
            step = fx / dfx
            x_new = x - step
        else:
            x_new = math.inf  # force bisection in the flat tails
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(fx) <= 1e-16 + 1e-16 * min(p, 1.0 - p) and abs(x_new - x) <= 1e-15 * (1.0 + abs(x)):
            return x_new
        x = x_new
    return x


def gaussian_cdf_gap(hi: float, lo: float) -> float:
    """Stable evaluation of ``gaussian_cdf(hi) - gaussian_cdf(lo)`` for hi > lo.

    Two cancellation regimes are handled specially: nearly equal
    arguments use a midpoint quadrature of the density, and arguments
    deep in the right tail are reflected into the left tail where the
    CDF values are small and exact.
    """
    if not hi > lo:
        raise DomainError("gaussian_cdf_gap: requires hi > lo")
    h = hi - lo
    if h < 1e-6:
        z = 0.5 * (hi + lo)
        return gaussian_pdf(z) * h * (1.0 + h * h * (z * z - 2.0) / 96.0)
    if hi + lo > 0.0:
        return gaussian_cdf(-lo) - gaussian_cdf(-hi)
    return gaussian_cdf(hi) - gaussian_cdf(lo)


def _e1_series(x: float, log_x: float | None = None) -> float:
    # Exponential integral E_1 for 0 <= x <= ~1:
    # E_1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    # log_x lets callers supply ln x when x itself has underflowed.
    total = -_EULER_GAMMA - (math.log(x) if log_x is None else log_x)
    term = 1.0
    for k in range(1, 200):
        term *= -x / k
        add = -term / k
        total += add
        if abs(add) <= 1e-18 * abs(total):
            break
    return total


def _upper_gamma_cf(a: float, x: float) -> float:
    # Gamma(a, x) = e^{-x} x^a / (x+1-a - 1(1-a)/(x+3-a - 2(2-a)/(...)))
    # (modified Lentz).  Valid for a <= 0 once x is bounded away from 0.
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    expo = -x + a * math.log(x)
    if expo < -745.0:
        return 0.0
    return math.exp(expo) * h


def _radial_kernel_reduced(y: float, n: int) -> float:
    # Integration by parts lowers the dimension by two per step:
    #   K_n(y) = (e^{-y^2/4} y^{2-n} - K_{n-2}(y)/2) / (n - 2)
    # with bases K_1 = sqrt(pi) * erfc(y/2) and K_2 = E_1(y^2/4) / 2.
    # Accurate for small y where the continued fraction is slow.
    x = 0.25 * y * y
    if n % 2 == 0:
        # ln(y^2/4) stays finite even when y^2/4 underflows
        g = 0.5 * _e1_series(x, log_x=2.0 * math.log(y) - math.log(4.0))
        k = 2
    else:
        g = _SQRT_PI * _erfc(0.5 * y)
        k = 1
    ey = math.exp(-x)
    while k < n:
        k += 2
        g = (ey * y ** (2 - k) - 0.5 * g) / (k - 2)
    return g


def _check_dimension(n: int) -> None:
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")


def radial_kernel(y: float, n: int) -> float:
    """Tail integral ``int_y^inf s^{1-n} exp(-s^2/4) ds`` for y > 0.

    Relative error below 1e-12 against the defining integral.  Equals
    ``2^{1-n} * Gamma(1 - n/2, y^2/4)`` (upper incomplete gamma), which
    is how the large-y branch is evaluated.
    """
    _check_dimension(n)
    if not y > 0.0:
        raise DomainError(f"radial_kernel: y must be positive, got {y!r}")
    x = 0.25 * y * y
    if x >= _GAMMA_CF_FLOOR:
        return 2.0 ** (1 - n) * _upper_gamma_cf(1.0 - 0.5 * n, x)
    return _radial_kernel_reduced(y, n)


def radial_kernel_derivative(y: float, n: int) -> float:
    """Derivative ``-y^{1-n} exp(-y^2/4)`` of :func:`radial_kernel`."""
    _check_dimension(n)
    if not y > 0.0:
        raise DomainError(f"radial_kernel_derivative: y must be positive, got {y!r}")
    expo = -0.25 * y * y
    if expo < -745.0:
        return -0.0
    return -(y ** (1 - n)) * math.exp(expo)


def radial_kernel_inverse(g: float, n: int) -> float:
    """Solve ``radial_kernel(y, n) = g`` for y > 0.

    Safeguarded Newton with an analytically seeded bracket; the result
    satisfies ``|radial_kernel(y, n) - g| <= 1e-11 * g``.
    """
    _check_dimension(n)
    if not g > 0.0:
        raise DomainError(f"radial_kernel_inverse: g must be positive, got {g!r}")
    # Seed from the small-y blow-up profile, then expand to a bracket.
    if n == 2:
        seed = math.exp(-min(g, 700.0))
    else:
        seed = ((n - 2) * g) ** (-1.0 / (n - 2))
    seed = min(max(seed, 1e-320), 50.0)
    lo = hi = seed
    for _ in range(2000):
        if lo < 5e-324 or radial_kernel(lo, n) >= g:
            break
        lo *= 0.5
    if not (lo > 0.0 and radial_kernel(lo, n) >= g):
        # n = 2 grows only logarithmically, so huge targets can exceed
        # every double-precision kernel value
        raise DomainError(f"radial_kernel_inverse: no representable preimage of {g!r}")
    for _ in range(2000):
        if radial_kernel(hi, n) <= g:
            break
        hi *= 2.0

    def midpoint(a, b):
        # geometric mean: the deep-tail roots sit many decades below the
        # bracket top and arithmetic bisection cannot reach them
        return math.exp(0.5 * (math.log(a) + math.log(b)))

    y = midpoint(lo, hi)
    for _ in range(400):
        fy = radial_kernel(y, n) - g
        if fy == 0.0:
            return y
        if fy > 0.0:
            lo = y
        else:
            hi = y
        dfy = radial_kernel_derivative(y, n)
        if dfy < -_TINY:
            y_new = y - fy / dfy
        else:
            y_new = math.inf
        if not lo < y_new < hi:
            y_new = midpoint(lo, hi)
        if abs(fy) <= 1e-13 * g and abs(y_new - y) <= 1e-14 * (1.0 + abs(y)):
            return y_new
        y = y_new
    return y


def radial_kernel_gap(y_inner: float, y_outer: float, n: int) -> float:
    """Stable ``radial_kernel(y_inner, n) - radial_kernel(y_outer, n)``.

    Requires ``0 < y_inner < y_outer``; the result is positive because
    the kernel decreases.  Nearly coincident arguments use a midpoint
    quadrature of the integrand to avoid cancellation.
    """
    if not 0.0 < y_inner < y_outer:
        raise DomainError("radial_kernel_gap: requires 0 < y_inner < y_outer")
    h = y_outer - y_inner
    if h < 1e-6 * max(1.0, y_inner):
        z = 0.5 * (y_inner + y_outer)
        dens = -radial_kernel_derivative(z, n)
        lg1 = (1 - n) / z - 0.5 * z
        lg2 = (n - 1) / (z * z) - 0.5
        return h * dens * (1.0 + h * h * (lg1 * lg1 + lg2) / 24.0)
    return radial_kernel(y_inner, n) - radial_kernel(y_outer, n)


def laplace_asymptote(y: float, n: int) -> float:
    """Small-y blow-up profile of the kernel.

    ``1 / ((n-2) y^{n-2})`` for n >= 3 and ``-ln y`` for n = 2; this is
    the fundamental solution profile of the Laplace operator up to the
    unit-sphere area factor, and ``radial_kernel(y, n)`` is asymptotic
    to it as y -> 0+.
    """
    _check_dimension(n)
    if not y > 0.0:
        raise DomainError(f"laplace_asymptote: y must be positive, got {y!r}")
    if n == 2:
        return -math.log(y)
    return 1.0 / ((n - 2) * y ** (n - 2))
