"""Complex special functions used by the mode solver.

log-Gamma, Airy, modified Bessel, and associated Legendre functions of
complex degree on the cut (1, ∞), all pure and reentrant.
"""

from .gamma import log_gamma, is_gamma_pole, GammaPoleError
from .airy import airy_ai
from .bessel import bessel_modified, SingularArgumentError
from .legendre import (
    LegendrePair,
    legendre_pair,
    legendre_batch,
    PrecisionExhausted,
)

__all__ = [
    "log_gamma",
    "is_gamma_pole",
    "GammaPoleError",
    "airy_ai",
    "bessel_modified",
    "SingularArgumentError",
    "LegendrePair",
    "legendre_pair",
    "legendre_batch",
    "PrecisionExhausted",
]
