"""Overflow-safe arithmetic on complex numbers in log form.

A nonzero complex number z is carried as w = log z, with Re w = log|z| and
Im w = arg z (not reduced mod 2π).  Products and ratios become sums, and
the only delicate operation is addition, done by factoring out the larger
term.  Gamma-type prefactors at k, |s| ~ 1e2 overflow double precision by
hundreds of orders of magnitude; every quantity of that kind in this
package stays in log form and only ratios are ever exponentiated.
"""

from __future__ import annotations

import numpy as np

#: log of a value treated as an exact zero (exp(LOG_ZERO) underflows to 0.0)
LOG_ZERO = -1e300


def from_value(z):
    """log z, with exact zeros mapped to LOG_ZERO."""
    z = np.asarray(z, dtype=complex)
    out = np.where(z == 0, LOG_ZERO + 0j, np.log(np.where(z == 0, 1.0, z)))
    if out.ndim == 0:
        return complex(out)
    return out


def to_value(w):
    """exp(w); overflows to inf rather than raising."""
    w = np.asarray(w, dtype=complex)
    with np.errstate(over="ignore", under="ignore"):
        out = np.exp(w)
    if out.ndim == 0:
        return complex(out)
    return out


def log_add(w1, w2):
    """log(exp(w1) + exp(w2)), stable for wildly different magnitudes."""
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    big = np.where(w1.real >= w2.real, w1, w2)
    small = np.where(w1.real >= w2.real, w2, w1)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        s = 1.0 + np.exp(small - big)
        out = np.where(s == 0, LOG_ZERO + 0j, big + np.log(np.where(s == 0, 1.0, s)))
    if out.ndim == 0:
        return complex(out)
    return out


def log_sub(w1, w2):
    """log(exp(w1) - exp(w2)); may land on LOG_ZERO at exact cancellation."""
    return log_add(w1, w2 + 1j * np.pi)


def log_sum(ws, axis=-1):
    """log of a sum of log-form values along an axis."""
    ws = np.asarray(ws, dtype=complex)
    m = ws.real.max(axis=axis, keepdims=True)
    with np.errstate(over="ignore", under="ignore"):
        s = np.sum(np.exp(ws - m), axis=axis)
    out = np.squeeze(m, axis=axis) + np.log(np.where(s == 0, 1.0, s))
    out = np.where(s == 0, LOG_ZERO + 0j, out)
    if out.ndim == 0:
        return complex(out)
    return out


def cancellation_digits(ws, axis=-1):
    """Decimal digits lost to cancellation when summing exp(ws).

    max Re(w) minus Re(log sum), in units of log 10.  Used to decide when a
    double-precision path must be escalated.
    """
    ws = np.asarray(ws, dtype=complex)
    m = ws.real.max(axis=axis)
    total = log_sum(ws, axis=axis)
    return (m - np.asarray(total).real) / np.log(10.0)
