"""Closed-form reference values, computed by series and independent of the quadrature engine.

The zero-frequency integral with a y-independent reflection coefficient is

    int_0^inf y ln(1 - x e^{-y}) dy = -Li_3(x),

so the l=0 term of an ideal reflector is -zeta(3) and the difference between
the Drude and neglected-carrier models is a difference of trilogarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import CONSTANTS, Geometry, PhysicalConstants

__all__ = ["OracleValue", "zeta3", "trilog", "classical_ideal_term", "drude_minus_neglected"]

_REL_TARGET = 1.0e-16
_NEAR_ONE = 1.0e-3  # switch to the expansion about x=1 when 1 - x is smaller


@dataclass(frozen=True)
class OracleValue:
    value: float
    series_terms_used: int
    bound_on_remainder: float


def zeta3() -> OracleValue:
    """Apery-type series ``zeta(3) = 5/2 sum (-1)^(n+1) / (n^3 binom(2n, n))``.

    Alternating with ratio below 1/4, so the first omitted term bounds the error.
    """
    terms = []
    n = 1
    while True:
        t = 2.5 / (n**3 * math.comb(2 * n, n))
        if t < _REL_TARGET * 1.2:
            return OracleValue(math.fsum(terms), len(terms), t)
        terms.append(t if n % 2 else -t)
        n += 1


def _trilog_series(x: float) -> OracleValue:
    terms = []
    power = 1.0
    n = 0
    while True:
        n += 1
        power *= x
        terms.append(power / n**3)
        # geometric majorant of the remainder
        bound = power * x / ((n + 1) ** 3 * (1.0 - x))
        if bound <= _REL_TARGET * terms[0]:
            return OracleValue(math.fsum(terms), n, bound)


def _trilog_near_one(x: float) -> OracleValue:
    # Li3(e^mu) = zeta(3) + zeta(2) mu + (3/2 - ln(-mu)) mu^2/2 + sum_{k>=3} zeta(3-k) mu^k/k!
    mu = math.log(x)
    z3 = zeta3()
    # zeta(0), zeta(-1), ..., zeta(-5)
    zeta_neg = (-0.5, -1.0 / 12.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0)
    terms = [z3.value, math.pi**2 / 6.0 * mu, (1.5 - math.log(-mu)) * mu * mu / 2.0]
    for k, z in enumerate(zeta_neg, start=3):
        terms.append(z * mu**k / math.factorial(k))
    r = abs(mu) / (2.0 * math.pi)
    bound = 4.0 * (2.0 * math.pi) ** 2 * r ** (3 + len(zeta_neg)) / (1.0 - r) + z3.bound_on_remainder
    return OracleValue(math.fsum(terms), len(terms) + z3.series_terms_used, bound)


def trilog(x: float) -> OracleValue:
    """Trilogarithm ``Li_3(x) = sum_n x^n / n^3`` on ``0 <= x <= 1``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"trilog is implemented on [0, 1] only, got {x}")
    if x == 0.0:
        return OracleValue(0.0, 0, 0.0)
    if x == 1.0:
        return zeta3()
    if 1.0 - x < _NEAR_ONE:
        return _trilog_near_one(x)
    return _trilog_series(x)


def classical_ideal_term(geom: Geometry, const: PhysicalConstants = CONSTANTS) -> float:
    """Force (N) from the l=0 term alone with both polarizations perfectly reflecting."""
    return -const.k_B * geom.T * geom.R * zeta3().value / (4.0 * geom.a**2)


def drude_minus_neglected(geom: Geometry, eps_0_static: float, const: PhysicalConstants = CONSTANTS) -> float:
    """``|F_Drude| - |F_neglected|`` in N, assuming carriers act only at l=0.

    Only the static TM coefficient differs between the two models (1 versus
    ``(eps_0-1)/(eps_0+1)``), and the l=0 term carries weight 1/2.
    """
    if not eps_0_static > 1.0:
        raise ValueError("static permittivity must exceed 1")
    r0 = (eps_0_static - 1.0) / (eps_0_static + 1.0)
    gap = zeta3().value - trilog(r0 * r0).value
    return const.k_B * geom.T * geom.R / (8.0 * geom.a**2) * gap
