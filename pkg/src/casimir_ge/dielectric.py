"""Permittivity of intrinsic Ge along the imaginary frequency axis.

Four response models share a single-oscillator core:

* ``NeglectedCarriers`` -- core only.
* ``Drude`` -- core plus free electrons and holes with finite relaxation.
* ``Plasma`` -- Drude with relaxation switched off.
* ``DriftDiffusion`` -- core at all nonzero frequencies; carriers only
  screen the static field (see :func:`debye_kappa`).

Carrier densities are given in cm^-3 and the carrier formulas are evaluated
in Gaussian units, so the plasma frequency comes out directly in rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .quantities import CONSTANTS, PhysicalConstants

__all__ = [
    "OscillatorModel",
    "CarrierSpecies",
    "NeglectedCarriers",
    "Drude",
    "Plasma",
    "DriftDiffusion",
    "MaterialModel",
    "MODEL_NAMES",
    "GE_OSCILLATOR",
    "GE_ELECTRONS",
    "GE_HOLES",
    "ZeroFrequencyError",
    "ge_model",
    "plasma_frequency",
    "eps_oscillator",
    "carrier_correction",
    "eps_model",
    "debye_kappa",
]


class ZeroFrequencyError(ValueError):
    """Raised when a finite-frequency permittivity is requested at l=0."""


@dataclass(frozen=True)
class OscillatorModel:
    """Single-oscillator permittivity with static value ``eps_0``,
    high-frequency value ``eps_inf`` and resonance ``omega_0`` (rad/s)."""

    eps_inf: float = 1.1
    eps_0: float = 16.2
    omega_0: float = 5.0e15

    def __post_init__(self) -> None:
        if not self.eps_inf >= 1.0:
            raise ValueError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if not self.eps_0 > self.eps_inf:
            raise ValueError("eps_0 must exceed eps_inf")
        if not self.omega_0 > 0.0:
            raise ValueError("omega_0 must be positive")


@dataclass(frozen=True)
class CarrierSpecies:
    """Free-carrier population.

    ``density`` in cm^-3, ``mass_ratio`` relative to the free electron mass,
    ``gamma`` relaxation rate in 1/s.
    """

    density: float
    mass_ratio: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not self.density >= 0.0:
            raise ValueError("carrier density must be non-negative")
        if not self.mass_ratio > 0.0:
            raise ValueError("effective mass ratio must be positive")
        if not self.gamma >= 0.0:
            raise ValueError("relaxation rate must be non-negative")


GE_OSCILLATOR = OscillatorModel()
GE_ELECTRONS = CarrierSpecies(density=2.3e13, mass_ratio=0.12, gamma=2.6e11)
GE_HOLES = CarrierSpecies(density=2.3e13, mass_ratio=0.21, gamma=2.6e11)


def plasma_frequency(species: CarrierSpecies, const: PhysicalConstants = CONSTANTS) -> float:
    """``sqrt(4 pi n e^2 / m_eff)`` in rad/s (Gaussian units throughout)."""
    m_eff = species.mass_ratio * const.m_electron
    return math.sqrt(4.0 * math.pi * species.density * const.e_gauss**2 / m_eff)


@dataclass(frozen=True)
class NeglectedCarriers:
    osc: OscillatorModel = GE_OSCILLATOR
    name = "neglected"


@dataclass(frozen=True)
class _WithCarriers:
    osc: OscillatorModel = GE_OSCILLATOR
    electrons: CarrierSpecies = GE_ELECTRONS
    holes: CarrierSpecies = GE_HOLES
    # geometry independent, so computed once
    omega_p_e: float = field(init=False, repr=False, compare=False)
    omega_p_h: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega_p_e", plasma_frequency(self.electrons))
        object.__setattr__(self, "omega_p_h", plasma_frequency(self.holes))

    def reduced_plasma_sq(self, omega_c: float) -> float:
        """Sum of squared plasma frequencies of both species in units of ``omega_c``."""
        return (self.omega_p_e / omega_c) ** 2 + (self.omega_p_h / omega_c) ** 2


@dataclass(frozen=True)
class Drude(_WithCarriers):
    name = "drude"


@dataclass(frozen=True)
class Plasma(_WithCarriers):
    """Drude carriers with both relaxation rates forced to zero on evaluation."""

    name = "plasma"


@dataclass(frozen=True)
class DriftDiffusion(_WithCarriers):
    name = "diffusion"


MaterialModel = Union[NeglectedCarriers, Drude, Plasma, DriftDiffusion]

MODEL_NAMES = ("neglected", "drude", "plasma", "diffusion")
_MODEL_TYPES = {"neglected": NeglectedCarriers, "drude": Drude, "plasma": Plasma, "diffusion": DriftDiffusion}


def ge_model(
    name: str,
    osc: OscillatorModel = GE_OSCILLATOR,
    electrons: CarrierSpecies = GE_ELECTRONS,
    holes: CarrierSpecies = GE_HOLES,
) -> MaterialModel:
    """Build one of the four models by canonical name, defaulting to intrinsic Ge."""
    try:
        cls = _MODEL_TYPES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}") from None
    if cls is NeglectedCarriers:
        return cls(osc)
    return cls(osc, electrons, holes)


def eps_oscillator(zeta: float, omega_c: float, osc: OscillatorModel) -> float:
    x = zeta * omega_c / osc.omega_0
    return osc.eps_inf + (osc.eps_0 - osc.eps_inf) / (1.0 + x * x)


def carrier_correction(zeta: float, omega_c: float, model: MaterialModel) -> float:
    """Free-carrier addition to the oscillator permittivity at ``zeta > 0``."""
    if isinstance(model, Drude):
        total = 0.0
        for omega_p, gamma in ((model.omega_p_e, model.electrons.gamma), (model.omega_p_h, model.holes.gamma)):
            wp = omega_p / omega_c
            total += wp * wp / (zeta * (zeta + gamma / omega_c))
        return total
    if isinstance(model, Plasma):
        return model.reduced_plasma_sq(omega_c) / (zeta * zeta)
    return 0.0


def eps_model(l: int, zeta: float, omega_c: float, model: MaterialModel) -> float:
    """Permittivity at the l-th Matsubara frequency, ``l >= 1``.

    Raises
    ------
    ZeroFrequencyError
        For ``l == 0``; the static term goes through
        :func:`casimir_ge.reflection.zero_frequency` instead.
    """
    if l == 0:
        raise ZeroFrequencyError("eps_model is undefined at l=0; use the zero-frequency reflection path")
    if l < 0 or not zeta > 0.0:
        raise ValueError(f"need l >= 1 and zeta > 0, got l={l}, zeta={zeta}")
    return eps_oscillator(zeta, omega_c, model.osc) + carrier_correction(zeta, omega_c, model)


def debye_kappa(
    electrons: CarrierSpecies,
    holes: CarrierSpecies,
    eps_0_static: float,
    T: float,
    const: PhysicalConstants = CONSTANTS,
) -> float:
    """Debye screening wavenumber in 1/m.

    ``kappa^2 = 4 pi e^2 (n_e + n_h) / (eps_0_static k_B T)``, Gaussian units,
    i.e. screening by both species inside the static dielectric background.
    """
    if not T > 0.0:
        raise ValueError("Debye screening wavenumber requires T > 0")
    if not eps_0_static > 0.0:
        raise ValueError("static permittivity must be positive")
    n = electrons.density + holes.density
    kappa_cgs = math.sqrt(4.0 * math.pi * const.e_gauss**2 * n / (eps_0_static * const.k_B_cgs * T))
    return 100.0 * kappa_cgs
