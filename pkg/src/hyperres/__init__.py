"""Resonances of Schrödinger operators Δ+V on hyperbolic space H^{n+1}.

Computes the resonance set of compactly supported radial potentials as
zeros of per-mode connection coefficients, and verifies the counting
asymptotics N_V(t) ~ A_n(r0) t^{n+1} together with the angular
distribution of resonances in sectors.
"""

__version__ = "0.1.0"

from .potentials import Potential, ModeIndex, multiplicity
from .phase import (
    PhaseValues,
    phase,
    exponent_H,
    rho_curve,
    indicator,
    weyl_constant,
    indicator_edge_derivative,
)

__all__ = [
    "Potential",
    "ModeIndex",
    "multiplicity",
    "PhaseValues",
    "phase",
    "exponent_H",
    "rho_curve",
    "indicator",
    "weyl_constant",
    "indicator_edge_derivative",
]
