"""Physical constants, geometry and the dimensionless scalings of the Matsubara sum.

Everything is SI except the carrier quantities (plasma frequency, Debye
wavenumber), which are evaluated in Gaussian units; see :mod:`casimir_ge.dielectric`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "Geometry",
    "MatsubaraPoint",
    "PFA_MAX_ASPECT",
    "matsubara_zeta",
    "matsubara_point",
    "characteristic_frequency",
    "reduce_frequency",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA-2018 values. ``e_gauss`` in statC and ``m_electron`` in grams."""

    hbar: float = 1.054571817e-34  # J s
    c: float = 2.99792458e8  # m/s
    k_B: float = 1.380649e-23  # J/K
    e_gauss: float = 4.80320425e-10  # statC
    m_electron: float = 9.1093837015e-28  # g

    def __post_init__(self) -> None:
        for name in ("hbar", "c", "k_B", "e_gauss", "m_electron"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"constant {name} must be positive")

    @property
    def k_B_cgs(self) -> float:
        """Boltzmann constant in erg/K."""
        return self.k_B * 1.0e7


CONSTANTS = PhysicalConstants()

#: Largest a/R for which the proximity force approximation is considered valid.
PFA_MAX_ASPECT = 1.0e-3


@dataclass(frozen=True)
class Geometry:
    """Sphere-plate configuration.

    Parameters
    ----------
    a : float
        Closest separation between lens and plate, m.
    R : float
        Lens radius, m.
    T : float
        Temperature, K.
    """

    a: float
    R: float
    T: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"separation a must be positive, got {self.a!r}")
        if not (math.isfinite(self.R) and self.R > 0.0):
            raise ValueError(f"radius R must be positive, got {self.R!r}")
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise ValueError(f"temperature T must be non-negative, got {self.T!r}")

    @property
    def aspect(self) -> float:
        return self.a / self.R

    @property
    def pfa_valid(self) -> bool:
        return self.aspect <= PFA_MAX_ASPECT

    def check_pfa(self) -> None:
        """Warn when a/R is too large for the proximity force approximation."""
        if not self.pfa_valid:
            warnings.warn(
                f"a/R = {self.aspect:.3g} exceeds {PFA_MAX_ASPECT:g}; "
                "proximity force approximation is unreliable",
                RuntimeWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class MatsubaraPoint:
    l: int
    zeta: float
    weight: float


def matsubara_zeta(l: int, geom: Geometry, const: PhysicalConstants = CONSTANTS) -> float:
    """Dimensionless Matsubara frequency ``4 pi a k_B T l / (hbar c)``."""
    if l < 0:
        raise ValueError(f"Matsubara index must be non-negative, got {l}")
    return l * (4.0 * math.pi * geom.a * const.k_B * geom.T / (const.hbar * const.c))


def matsubara_point(l: int, geom: Geometry, const: PhysicalConstants = CONSTANTS) -> MatsubaraPoint:
    # the l=0 term enters the primed sum with weight 1/2
    return MatsubaraPoint(l, matsubara_zeta(l, geom, const), 0.5 if l == 0 else 1.0)


def characteristic_frequency(geom: Geometry, const: PhysicalConstants = CONSTANTS) -> float:
    """``omega_c = c / (2a)`` in rad/s."""
    return const.c / (2.0 * geom.a)


def reduce_frequency(omega: float, geom: Geometry, const: PhysicalConstants = CONSTANTS) -> float:
    """Express a frequency (rad/s) in units of :func:`characteristic_frequency`."""
    return omega / characteristic_frequency(geom, const)
