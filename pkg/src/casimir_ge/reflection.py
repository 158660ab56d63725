"""TM/TE reflection coefficients of a homogeneous half-space at imaginary frequency.

Arguments are in the reduced variables of the Matsubara sum: ``zeta`` is the
frequency and ``y`` the (shifted) wave-vector variable, both in units of
``omega_c = c/2a``; the integration domain is ``y >= zeta``.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

from .dielectric import (
    DriftDiffusion,
    Drude,
    MaterialModel,
    NeglectedCarriers,
    Plasma,
    debye_kappa,
    eps_model,
)
from .quantities import Geometry, characteristic_frequency

__all__ = [
    "ReflectionPair",
    "fresnel",
    "static_dielectric_tm",
    "diffusion_tm",
    "reduced_kappa",
    "zero_frequency",
    "reflector",
]


class ReflectionPair(NamedTuple):
    r_tm: float
    r_te: float


def fresnel(zeta: float, y: float, eps: float) -> ReflectionPair:
    """Fresnel coefficients for permittivity ``eps`` at imaginary frequency ``zeta``."""
    # hypot keeps s = y exactly at zeta = 0 and avoids underflow of y*y
    s = math.hypot(y, math.sqrt(eps - 1.0) * zeta)
    return ReflectionPair((eps * y - s) / (eps * y + s), (y - s) / (y + s))


def static_dielectric_tm(eps_0: float) -> float:
    return (eps_0 - 1.0) / (eps_0 + 1.0)


def diffusion_tm(y: float, eps_0: float, kappa_reduced: float) -> float:
    """Zero-frequency TM coefficient of a dielectric with Debye-screened carriers.

    Interpolates between ``(eps_0-1)/(eps_0+1)`` at ``kappa_reduced = 0`` and 1
    as ``kappa_reduced`` grows; ``kappa_reduced`` is the screening wavenumber
    times ``2a``.
    """
    q = eps_0 * math.sqrt(y * y + kappa_reduced * kappa_reduced)
    return (q - y) / (q + y)


def reduced_kappa(model: DriftDiffusion, geom: Geometry) -> float:
    return 2.0 * geom.a * debye_kappa(model.electrons, model.holes, model.osc.eps_0, geom.T)


def zero_frequency(y: float, model: MaterialModel, geom: Geometry) -> ReflectionPair:
    """Reflection coefficients of the l=0 Matsubara term, ``y > 0``."""
    if isinstance(model, NeglectedCarriers):
        return ReflectionPair(static_dielectric_tm(model.osc.eps_0), 0.0)
    if isinstance(model, Drude):
        return ReflectionPair(1.0, 0.0)
    if isinstance(model, Plasma):
        s = math.sqrt(y * y + model.reduced_plasma_sq(characteristic_frequency(geom)))
        return ReflectionPair(1.0, (y - s) / (y + s))
    if isinstance(model, DriftDiffusion):
        return ReflectionPair(diffusion_tm(y, model.osc.eps_0, reduced_kappa(model, geom)), 0.0)
    raise TypeError(f"unsupported material model {type(model).__name__}")


def reflector(l: int, zeta: float, model, geom: Geometry) -> Callable[[float], ReflectionPair]:
    """Return ``y -> ReflectionPair`` for the l-th Matsubara term.

    The permittivity is evaluated once per term.  Objects outside the four
    Ge models may take part by providing their own
    ``reflector(l, zeta, geom)`` method.
    """
    custom = getattr(model, "reflector", None)
    if custom is not None:
        return custom(l, zeta, geom)
    if l == 0:
        return lambda y: zero_frequency(y, model, geom)
    eps = eps_model(l, zeta, characteristic_frequency(geom), model)
    return lambda y: fresnel(zeta, y, eps)
