"""Liouville phase, growth exponent, zero curve, indicator, Weyl constants.

Central objects (α complex with Re α ≥ 0, r > 0):

    φ(α,r) = α log[(α cosh r + R)/√(α²-1)] + ½ log[(cosh r - R)/(cosh r + R)]
    R      = √(1 + α² sinh² r)
    H(α,r) = Re[2α log(α cosh r + R) - α log(α²-1)] + log|(cosh r - R)/(cosh r + R)|

H is the exponential growth rate of the relative scattering matrix
eigenvalues: log|Λ_k| ≈ k·H((s-n/2)/k, r0).  The curve {H = 0} in polar
form x = ϱ(θ) separates growth from decay; the indicator

    h_{r0}(θ) = (2/Γ(n)) ∫_{ϱ(θ)}^∞ H(x e^{iθ}, r0) x^{-n-2} dx

integrates to the Weyl constant A_n(r0) = A_n^(0) + ((n+1)/2π) ∫ h dθ.

All logs and square roots are principal-branch; degrees never enter here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad


class BranchPointError(ValueError):
    """α = ±1 is a branch point of log(α²-1)."""


class BracketFailure(RuntimeError):
    """The root bracket for ϱ(θ) could not be established."""


@dataclass(frozen=True)
class PhaseValues:
    """φ and friends at one (α, r)."""

    phi: complex
    phi_prime_r: complex
    p: complex
    q: complex
    zeta: complex


def _check_alpha(alpha: complex):
    if abs(alpha - 1.0) < 1e-14 or abs(alpha + 1.0) < 1e-14:
        raise BranchPointError(f"branch point at alpha={alpha}")


def phase(alpha: complex, r: float) -> PhaseValues:
    """Liouville phase φ(α,r), its r-derivative, p(α), q(α), ζ(α,r)."""
    alpha = complex(alpha)
    r = float(r)
    if r <= 0:
        raise ValueError("r must be > 0")
    _check_alpha(alpha)
    ch, sh = np.cosh(r), np.sinh(r)
    root = np.sqrt(1.0 + alpha * alpha * sh * sh)
    # (ch - root)/(ch + root) = (1-α²) sinh²r/(ch + root)²: same complex
    # number, but free of the catastrophic cancellation at small r
    phi = alpha * np.log((alpha * ch + root) / np.sqrt(alpha * alpha - 1.0)) + 0.5 * np.log(
        (1.0 - alpha * alpha) * sh * sh / (ch + root) ** 2
    )
    phi_prime = root / sh
    p = 0.5 * alpha * np.log((alpha + 1.0) / (alpha - 1.0)) + 0.5 * np.log(1.0 - alpha * alpha)
    q = alpha * np.log(alpha / np.sqrt(alpha * alpha - 1.0)) + 0.5 * np.log(
        (1.0 - alpha) / (1.0 + alpha)
    )
    zeta = (1.5 * phi) ** (2.0 / 3.0)
    return PhaseValues(
        phi=complex(phi),
        phi_prime_r=complex(phi_prime),
        p=complex(p),
        q=complex(q),
        zeta=complex(zeta),
    )


def exponent_H(alpha, r):
    """Growth exponent H(α,r) from its defining formula (vectorized)."""
    alpha = np.asarray(alpha, dtype=complex)
    if np.any(np.abs(alpha - 1.0) < 1e-14) or np.any(np.abs(alpha + 1.0) < 1e-14):
        raise BranchPointError("branch point at alpha = ±1")
    r = np.asarray(r, dtype=float)
    ch, sh = np.cosh(r), np.sinh(r)
    root = np.sqrt(1.0 + alpha * alpha * sh * sh)
    t1 = 2.0 * alpha * np.log(alpha * ch + root) - alpha * np.log(alpha * alpha - 1.0)
    t2 = np.log(np.abs((1.0 - alpha * alpha) * sh * sh / (ch + root) ** 2))
    out = t1.real + t2
    if out.ndim == 0:
        return float(out)
    return out


def exponent_H_two_phase(alpha, r):
    """H(α,r) through the second route 2φ - 2p + the entropy-type terms.

    Must agree with exponent_H to ~1e-10; exercising both formulas checks
    the principal-branch bookkeeping.
    """
    alpha = np.asarray(alpha, dtype=complex)
    if np.any(np.abs(alpha - 1.0) < 1e-14) or np.any(np.abs(alpha + 1.0) < 1e-14):
        raise BranchPointError("branch point at alpha = ±1")
    r = np.asarray(r, dtype=float)
    ch, sh = np.cosh(r), np.sinh(r)
    root = np.sqrt(1.0 + alpha * alpha * sh * sh)
    phi = alpha * np.log((alpha * ch + root) / np.sqrt(alpha * alpha - 1.0)) + 0.5 * np.log(
        (1.0 - alpha * alpha) * sh * sh / (ch + root) ** 2
    )
    p = 0.5 * alpha * np.log((alpha + 1.0) / (alpha - 1.0)) + 0.5 * np.log(1.0 - alpha * alpha)
    out = (
        2.0 * phi
        - 2.0 * p
        + (alpha + 1.0) * np.log(alpha + 1.0)
        - (alpha - 1.0) * np.log(alpha - 1.0)
    ).real
    if out.ndim == 0:
        return float(out)
    return out


def d_r_H(alpha, r):
    """∂_r H(α,r) = 2 Re(√(1+α² sinh²r)/sinh r)."""
    alpha = np.asarray(alpha, dtype=complex)
    r = np.asarray(r, dtype=float)
    sh = np.sinh(r)
    out = 2.0 * (np.sqrt(1.0 + alpha * alpha * sh * sh) / sh).real
    if out.ndim == 0:
        return float(out)
    return out


def rho_curve(theta: float, r0: float) -> float:
    """The positive root x = ϱ(θ) of H(x e^{iθ}, r0) = 0.

    At θ = ±π/2 the exponent vanishes identically on x ≥ 1/sinh r0, and
    ϱ is the edge of that set, known in closed form.
    """
    theta = float(theta)
    r0 = float(r0)
    if r0 <= 0:
        raise ValueError("r0 must be > 0")
    if abs(abs(theta) - np.pi / 2.0) < 1e-12:
        return 1.0 / math.sinh(r0)
    if abs(theta) > np.pi / 2.0:
        raise ValueError("theta must lie in [-pi/2, pi/2]")
    e = np.exp(1j * theta)

    def f(x):
        return exponent_H(x * e, r0)

    lo = 1e-3 / math.sinh(r0)
    hi = 1e3
    if f(lo) >= 0 or f(hi) <= 0:
        raise BracketFailure(
            f"no sign change on [{lo:.3e}, {hi:.3e}] at theta={theta}, r0={r0}: "
            f"H(lo)={f(lo):.3e}, H(hi)={f(hi):.3e}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    x = 0.5 * (lo + hi)
    # one secant polish; H is transversal off the corners
    f1, f2 = f(lo), f(hi)
    if f2 != f1:
        x = lo - f1 * (hi - lo) / (f2 - f1)
    return float(np.clip(x, lo, hi))


def indicator(theta: float, r0: float, n: int) -> float:
    """Indicator h_{r0}(θ) by adaptive quadrature, abs error ≤ 1e-8.

    The positive part collapses to an integral from ϱ(θ): H > 0 exactly
    beyond the zero curve along each ray with |θ| < π/2.  The tail uses
    the substitution x = 1/u (H grows linearly, so H·x^{-n-2} ~ x^{-n-1}).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    theta = float(theta)
    if abs(abs(theta) - np.pi / 2.0) < 1e-12:
        return 0.0
    rho = rho_curve(theta, r0)
    e = np.exp(1j * theta)
    cut = 10.0 * rho

    def body(x):
        return exponent_H(x * e, r0) / x ** (n + 2)

    def tail(u):
        return exponent_H(e / u, r0) * u ** n

    v1, e1 = quad(body, rho, cut, limit=200, epsabs=1e-11, epsrel=1e-11)
    v2, e2 = quad(tail, 0.0, 1.0 / cut, limit=200, epsabs=1e-11, epsrel=1e-11)
    return 2.0 / math.gamma(n) * (v1 + v2)


@dataclass(frozen=True)
class IndicatorTable:
    """Sampled indicator and zero curve on a θ grid."""

    theta_grid: np.ndarray
    h_values: np.ndarray
    rho_values: np.ndarray
    r0: float
    n: int

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("theta,h,rho\n")
            for t, h, rho in zip(self.theta_grid, self.h_values, self.rho_values):
                fh.write(f"{t:.17g},{h:.17g},{rho:.17g}\n")


def indicator_table(r0: float, n: int, num_theta: int = 181) -> IndicatorTable:
    thetas = np.linspace(-np.pi / 2.0, np.pi / 2.0, num_theta)
    h = np.array([indicator(t, r0, n) for t in thetas])
    rho = np.array([rho_curve(t, r0) for t in thetas])
    return IndicatorTable(theta_grid=thetas, h_values=h, rho_values=rho, r0=r0, n=n)


def weyl_constant(n: int, r0: float):
    """(A_n^(0), A_n(r0)): model constant and the full Weyl constant.

    A_n^(0) = 2/(n+1)! for n odd and 0 for n even, returned exactly as a
    Fraction; A_n(r0) adds ((n+1)/2π) ∫ h_{r0}(θ) dθ by quadrature.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a0 = Fraction(2, math.factorial(n + 1)) if n % 2 == 1 else Fraction(0)
    val, err = quad(
        lambda t: indicator(t, r0, n),
        -np.pi / 2.0,
        np.pi / 2.0,
        limit=120,
        epsabs=1e-9,
        epsrel=1e-9,
    )
    return a0, float(a0) + (n + 1) / (2.0 * np.pi) * val


def indicator_edge_derivative(n: int, r0: float) -> float:
    """One-sided derivative h'_{r0}(-π/2+).

    Explicit form (4/Γ(n)) ∫_{1/sinh r0}^∞ x^{-(n+1)}
    log[(x cosh r0 + √(x² sinh²r0 - 1))/√(x²+1)] dx; the integrand
    vanishes at the lower endpoint.
    """
    lo = 1.0 / math.sinh(r0)
    ch, sh = math.cosh(r0), math.sinh(r0)

    def body(x):
        return x ** (-(n + 1)) * math.log(
            (x * ch + math.sqrt(max(x * x * sh * sh - 1.0, 0.0))) / math.sqrt(x * x + 1.0)
        )

    def tail(u):
        x = 1.0 / u
        return u ** (n - 1) * math.log(
            (x * ch + math.sqrt(x * x * sh * sh - 1.0)) / math.sqrt(x * x + 1.0)
        )

    cut = 10.0 * lo
    v1, _ = quad(body, lo, cut, limit=200, epsabs=1e-11, epsrel=1e-11)
    v2, _ = quad(tail, 0.0, 1.0 / cut, limit=200, epsabs=1e-11, epsrel=1e-11)
    return 4.0 / math.gamma(n) * (v1 + v2)
