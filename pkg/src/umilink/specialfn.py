"""Special-function kernel for the closed-form outage expressions.

The Gaussian Q-function, the regularized lower incomplete gamma function,
and the modified Bessel functions are delegated to the battle-tested
implementations in ``scipy.special``; the half-integer Laguerre functions
are assembled from a Bessel-function identity that stays stable for the
large Rician factors this package works with.  All functions are pure and
accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "HalfOrder",
    "q_function",
    "regularized_lower_gamma",
    "bessel_i",
    "laguerre_half",
]

_SQRT2 = float(np.sqrt(2.0))


class HalfOrder(enum.Enum):
    """The two half-integer Laguerre orders used by the moment formulas."""

    ONE_HALF = "1/2"
    THREE_HALVES = "3/2"


def _as_array(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} requires finite input, got {x!r}")
    return arr


def _scalar_or_array(out, like):
    if np.isscalar(like) or (isinstance(like, np.ndarray) and like.ndim == 0):
        return float(out)
    return out


def q_function(x):
    """Upper-tail probability of the standard Gaussian, Q(x).

    Computed through the complementary error function; absolute error is
    far below 1e-12 over the whole real line, which matters because these
    values are summed over thousands of sector atoms.
    """
    arr = _as_array(x, "q_function")
    return _scalar_or_array(0.5 * special.erfc(arr / _SQRT2), x)


def regularized_lower_gamma(a, x):
    """Regularized lower incomplete gamma function P(a, x) in [0, 1].

    Parameters
    ----------
    a : positive shape parameter.
    x : non-negative evaluation point (scalar or array).
    """
    if not (np.isscalar(a) and np.isfinite(a)) or a <= 0:
        raise DomainError(f"shape parameter must be a positive real, got {a!r}")
    arr = _as_array(x, "regularized_lower_gamma")
    if np.any(arr < 0):
        raise DomainError("regularized_lower_gamma requires x >= 0")
    return _scalar_or_array(special.gammainc(a, arr), x)


def bessel_i(order, x):
    """Modified Bessel function of the first kind, order 0 or 1."""
    if order not in (0, 1):
        raise DomainError(f"only orders 0 and 1 are supported, got {order!r}")
    arr = _as_array(x, "bessel_i")
    out = special.i0(arr) if order == 0 else special.i1(arr)
    return _scalar_or_array(out, x)


def laguerre_half(order, x):
    """Laguerre function of order 1/2 or 3/2 evaluated at x <= 0.

    Uses the closed form through exponentially scaled Bessel functions,

        L_{1/2}(x)  = e^{x/2} [(1 - x) I0(-x/2) - x I1(-x/2)],
        L_{-1/2}(x) = e^{x/2} I0(-x/2),
        L_{3/2}(x)  = (2/3) [(2 - x) L_{1/2}(x) - L_{-1/2}(x)/2],

    which avoids overflow for arguments as large in magnitude as -2000.
    Only non-positive arguments are supported; every use in the outage
    formulas evaluates at minus a Rician factor.
    """
    if not isinstance(order, HalfOrder):
        raise DomainError(f"order must be a HalfOrder, got {order!r}")
    arr = _as_array(x, "laguerre_half")
    if np.any(arr > 0):
        raise DomainError("laguerre_half is only supported for x <= 0")
    t = -arr / 2.0  # t >= 0; i0e/i1e carry the e^{-t} factor
    l_half = (1.0 - arr) * special.i0e(t) - arr * special.i1e(t)
    if order is HalfOrder.ONE_HALF:
        out = l_half
    else:
        l_minus_half = special.i0e(t)
        out = (2.0 / 3.0) * ((2.0 - arr) * l_half - 0.5 * l_minus_half)
    return _scalar_or_array(out, x)
