"""Principal-branch log-Gamma with explicit pole signalling.

Callers detect zeros of 1/Γ by catching GammaPoleError rather than by
inspecting inf/nan, so the pole set {0, -1, -2, ...} is a contract here.
"""

from __future__ import annotations

import numpy as np
from scipy.special import loggamma as _loggamma


class GammaPoleError(ValueError):
    """Raised when log Γ is requested at a non-positive integer."""


def is_gamma_pole(z, tol: float = 1e-12) -> bool:
    """True if z is within tol of a pole of Γ (non-positive integer)."""
    z = complex(z)
    if z.real > 0.5:
        return False
    n = round(z.real)
    return n <= 0 and abs(z - n) <= tol


def log_gamma(z):
    """Principal branch of log Γ(z) for complex z.

    Scalars raise GammaPoleError at poles; array input maps poles to +inf
    (the caller is expected to have guarded them).
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        if is_gamma_pole(complex(z)):
            raise GammaPoleError(f"gamma pole at z={complex(z)}")
        return complex(_loggamma(complex(z)))
    return _loggamma(z)


def recip_gamma_log(z):
    """log(1/Γ(z)) where finite; poles of Γ give LOG_ZERO (1/Γ = 0 there)."""
    from ..logspace import LOG_ZERO

    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        if is_gamma_pole(complex(z)):
            return complex(LOG_ZERO)
        return -complex(_loggamma(complex(z)))
    out = -_loggamma(z)
    bad = ~np.isfinite(out)
    if np.any(bad):
        out = np.where(bad, LOG_ZERO + 0j, out)
    return out
