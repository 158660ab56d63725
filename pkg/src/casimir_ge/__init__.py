"""Thermal Casimir force between a Ge lens and a Ge plate under four carrier models."""

from .dielectric import (
    MODEL_NAMES,
    CarrierSpecies,
    DriftDiffusion,
    Drude,
    NeglectedCarriers,
    OscillatorModel,
    Plasma,
    ge_model,
)
from .engine import (
    ConvergenceError,
    EngineConfig,
    ForceResult,
    TermBreakdown,
    casimir_force,
    model_difference,
    sweep,
)
from .quantities import CONSTANTS, Geometry

__all__ = [
    "CONSTANTS",
    "MODEL_NAMES",
    "CarrierSpecies",
    "ConvergenceError",
    "DriftDiffusion",
    "Drude",
    "EngineConfig",
    "ForceResult",
    "Geometry",
    "NeglectedCarriers",
    "OscillatorModel",
    "Plasma",
    "TermBreakdown",
    "casimir_force",
    "ge_model",
    "model_difference",
    "sweep",
]

__version__ = "0.1.0"
