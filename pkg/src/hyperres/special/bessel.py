"""Modified Bessel functions I_k, K_k for complex argument, real order.

Used for the fixed-order / large-degree regime of the Legendre functions
and as an independent oracle for Ai (through K_{1/3}).
"""

from __future__ import annotations

import numpy as np
from scipy.special import iv as _iv, kv as _kv


class SingularArgumentError(ValueError):
    """K_k(z) is singular at z = 0."""


def bessel_modified(order: float, z):
    """(I_k(z), K_k(z)) for real order k >= 0 and complex z, |arg z| < π/2."""
    if order < 0:
        raise ValueError("order must be >= 0")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularArgumentError("singular argument: K_k(0) diverges")
    i = _iv(order, z)
    k = _kv(order, z)
    if i.ndim == 0:
        return complex(i), complex(k)
    return i, k
