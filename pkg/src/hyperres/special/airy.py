"""Airy function Ai on the complex plane.

Backed by the AMOS routines behind scipy.special.airy (entire function, no
error cases).  A scaled variant is provided for |w| large enough that
exp(-(2/3)w^{3/2}) underflows or overflows.
"""

from __future__ import annotations

import numpy as np
from scipy.special import airy as _airy, airye as _airye


def airy_ai(w):
    """Ai(w) for complex w."""
    w = np.asarray(w, dtype=complex)
    out = _airy(w)[0]
    if out.ndim == 0:
        return complex(out)
    return out


def airy_ai_scaled(w):
    """Ai(w) * exp((2/3) w^{3/2}), principal branch of w^{3/2}."""
    w = np.asarray(w, dtype=complex)
    out = _airye(w)[0]
    if out.ndim == 0:
        return complex(out)
    return out


def log_airy_ai(w):
    """log Ai(w) in log form, safe for large |w|."""
    w = np.asarray(w, dtype=complex)
    scaled = _airye(w)[0]
    out = np.log(scaled) - (2.0 / 3.0) * w ** 1.5
    if out.ndim == 0:
        return complex(out)
    return out
