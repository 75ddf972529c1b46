"""Special functions for the split-trap eigenproblem.

Provides the gamma function, the confluent hypergeometric (Kummer)
functions M and U, and physicists' Hermite polynomials, for the
parameter ranges the trap solver actually visits.  U is supported for
b = 1/2 only, which is the case generated by even parity states.

All functions accept scalars; ``kummer_m``, ``kummer_u`` and
``hermite`` also accept numpy arrays for the coordinate argument.
"""

import math

import numpy as np
from scipy.integrate import quad

POLE_TOL = 1e-14

_M_MAX_TERMS = 500
_M_REL_TOL = 1e-16
# Branch switches for U, set by measuring each route against a
# high-precision reference.  The connection formula loses digits to
# cancellation between its two e^z-sized terms, and the loss sets in
# earlier the closer a sits to zero from above.
_U_ASYMPTOTIC_Z = 18.0
_U_ASYMPTOTIC_Z_POSITIVE_A = 30.0
_U_INTEGRAL_Z = 8.0
_U_ASYMPTOTIC_MAX_TERMS = 300

_SQRT_PI = math.sqrt(math.pi)


class PoleError(ValueError):
    """Argument lies on (or within POLE_TOL of) a gamma-function pole."""


def _near_pole(x):
    return x <= 0.5 and abs(x - round(x)) <= POLE_TOL


def gamma(x):
    """Gamma function for real scalar x.

    Parameters
    ----------
    x : float
        Argument; must stay clear of the poles at 0, -1, -2, ...

    Returns
    -------
    float

    Raises
    ------
    PoleError
        If x is within POLE_TOL of a non-positive integer.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("gamma argument must be finite")
    if _near_pole(x):
        raise PoleError(f"gamma pole at x = {x!r}")
    return math.gamma(x)


def reciprocal_gamma(x):
    """1/gamma(x), returning exactly 0.0 at the poles of gamma."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("reciprocal_gamma argument must be finite")
    if _near_pole(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    return arr, arr.ndim == 0


def _m_series(a, b, z):
    """Kummer M power series, vectorized over z.

    Terms are accumulated until every element satisfies
    |term| <= _M_REL_TOL * |sum|.  For non-positive integer a the
    series terminates exactly.
    """
    term = np.ones_like(z)
    total = np.ones_like(z)
    for n in range(1, _M_MAX_TERMS + 1):
        term = term * ((a + n - 1.0) / (b + n - 1.0)) * z / n
        total = total + term
        if np.all(np.abs(term) <= _M_REL_TOL * np.abs(total)):
            return total
    raise RuntimeError(
        f"Kummer M series did not converge within {_M_MAX_TERMS} terms "
        f"(a={a}, b={b}, max |z|={np.max(np.abs(z))})"
    )


def kummer_m(a, b, z):
    """Confluent hypergeometric function M(a, b, z) by power series.

    Parameters
    ----------
    a, b : float
        Series parameters; b must not be a non-positive integer.
    z : float or ndarray

    Returns
    -------
    float or ndarray
    """
    a = float(a)
    b = float(b)
    if _near_pole(b):
        raise ValueError(f"kummer_m undefined for non-positive integer b = {b!r}")
    zarr, scalar = _as_array(z)
    out = _m_series(a, b, zarr)
    return float(out) if scalar else out


def _u_connection(a, z):
    # U(a, 1/2, z) from the b = 1/2 connection formula.  A reciprocal
    # gamma keeps the limits finite when a or a + 1/2 hits a pole.
    c1 = reciprocal_gamma(a + 0.5)
    c2 = reciprocal_gamma(a)
    m1 = _m_series(a, 0.5, z) if c1 != 0.0 else np.zeros_like(z)
    m2 = _m_series(a + 0.5, 1.5, z) if c2 != 0.0 else np.zeros_like(z)
    return _SQRT_PI * (c1 * m1 - 2.0 * np.sqrt(z) * c2 * m2)


def _u_asymptotic(a, z):
    # Large-z expansion z^-a * sum_s (a)_s (a+1/2)_s / (s! (-z)^s),
    # truncated at the smallest term element by element.  For negative a
    # the first few terms grow while the Pochhammer factors are still
    # large, so truncation is only armed once s has passed |a|.
    term = np.ones_like(z)
    total = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    arm_truncation = math.ceil(max(0.0, -a)) + 1
    for s in range(_U_ASYMPTOTIC_MAX_TERMS):
        nxt = term * (a + s) * (a + 0.5 + s) / ((s + 1.0) * (-z))
        if s >= arm_truncation:
            grew = np.abs(nxt) >= np.abs(term)
            active = active & ~grew
        total = np.where(active, total + nxt, total)
        term = np.where(active, nxt, term)
        done = np.abs(term) <= _M_REL_TOL * np.abs(total)
        active = active & ~done
        if not np.any(active):
            break
    return z ** (-a) * total


def _u_integral(a, z):
    # Laplace integral U(a, 1/2, z) = (1/Gamma(a)) * int_0^inf
    # e^{-z t} t^{a-1} (1+t)^{-a-1/2} dt, valid for a > 0.  The
    # integrable endpoint singularity t^{a-1} is passed to the
    # quadrature as an algebraic weight so small a stays accurate.
    power = -a - 0.5
    out = np.empty_like(z)
    for i, zi in enumerate(z):
        head, _ = quad(
            lambda t: math.exp(-zi * t) * (1.0 + t) ** power,
            0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0),
            epsabs=0.0, epsrel=1e-12, limit=200,
        )
        tail, _ = quad(
            lambda t: math.exp(-zi * t) * t ** (a - 1.0) * (1.0 + t) ** power,
            1.0, np.inf, epsabs=1e-300, epsrel=1e-12, limit=200,
        )
        out[i] = (head + tail) * reciprocal_gamma(a)
    return out


def kummer_u(a, b, z):
    """Confluent hypergeometric function U(a, b, z) for b = 1/2, z >= 0.

    Three routes cover the domain: the M-connection formula at small z,
    the large-z expansion truncated at its smallest term, and for a > 0
    a Laplace-integral quadrature bridging the region where the
    connection formula cancels badly but the expansion has not yet
    converged.

    Parameters
    ----------
    a : float
    b : float
        Must equal 0.5; other values are outside the supported domain.
    z : float or ndarray
        Non-negative.

    Returns
    -------
    float or ndarray
    """
    a = float(a)
    if float(b) != 0.5:
        raise ValueError(f"kummer_u supports b = 1/2 only, got b = {b!r}")
    zarr, scalar = _as_array(z)
    if np.any(zarr < 0.0):
        raise ValueError("kummer_u requires z >= 0")
    out = np.empty_like(zarr)
    if a > 0.0:
        switch = _U_ASYMPTOTIC_Z_POSITIVE_A
        series = zarr <= _U_INTEGRAL_Z
        bridge = (zarr > _U_INTEGRAL_Z) & (zarr <= switch)
        if np.any(series):
            out[series] = _u_connection(a, zarr[series])
        if np.any(bridge):
            out[bridge] = _u_integral(a, zarr[bridge])
    else:
        switch = _U_ASYMPTOTIC_Z
        series = zarr <= switch
        if np.any(series):
            out[series] = _u_connection(a, zarr[series])
    large = zarr > switch
    if np.any(large):
        out[large] = _u_asymptotic(a, zarr[large])
    return float(out) if scalar else out


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, 0 <= n <= 60.
    x : float or ndarray

    Returns
    -------
    float or ndarray
    """
    if n != int(n) or n < 0:
        raise ValueError(f"hermite degree must be a non-negative integer, got {n!r}")
    n = int(n)
    if n > 60:
        raise ValueError(f"hermite degree {n} exceeds the supported maximum 60")
    xarr, scalar = _as_array(x)
    h_prev = np.ones_like(xarr)
    if n == 0:
        return float(h_prev) if scalar else h_prev
    h = 2.0 * xarr
    for k in range(1, n):
        h, h_prev = 2.0 * xarr * h - 2.0 * k * h_prev, h
    return float(h) if scalar else h
