"""Modified Bessel function of the second kind.

Evaluated through the exponential integral representation

    K_v(x) = int_0^inf exp(-x cosh t) cosh(v t) dt,   x > 0,

with the integrand rescaled by its peak value so that large orders do
not overflow before the final exponentiation.
"""
from __future__ import annotations

import math

from scipy.integrate import quad

__all__ = ["BesselDomainError", "bessel_k"]


class BesselDomainError(ValueError):
    """bessel_k requires x > 0."""


def _log_cosh(u: float) -> float:
    au = abs(u)
    return au + math.log1p(math.exp(-2.0 * au)) - math.log(2.0)


def bessel_k(order: float, x: float) -> float:
    """K_order(x) for real order and x > 0; symmetric in the order."""
    if not x > 0.0:
        raise BesselDomainError(f"bessel_k needs x > 0, got {x!r}")
    v = abs(float(order))  # K_{-v} = K_v
    x = float(x)

    # integrand exponent h(t) = -x cosh t + log cosh(v t); peak near
    # asinh(v/x) once the tanh factor saturates, at t = 0 otherwise
    t_pk = math.asinh(v / x) if v > 0.0 else 0.0
    h_pk = -x * math.cosh(t_pk) + _log_cosh(v * t_pk)
    if -x + _log_cosh(0.0) > h_pk:
        t_pk, h_pk = 0.0, -x + _log_cosh(0.0)

    def f(t: float) -> float:
        return math.exp(-x * math.cosh(t) + _log_cosh(v * t) - h_pk)

    t_end = t_pk + 3.0
    while -x * math.cosh(t_end) + _log_cosh(v * t_end) - h_pk > -60.0:
        t_end += 3.0

    total = 0.0
    edges = sorted({0.0, t_pk, min(t_pk + 2.0, t_end), t_end})
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=300)
            total += val
    return math.exp(h_pk) * total
