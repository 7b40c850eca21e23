"""Per-mode scattering data for radial potentials on H^{n+1}.

For the spherical-harmonic mode of weight l (order k = l+(n-1)/2, degree
ν = s-(n+1)/2) the radial equation

    [-∂_r² - n coth r ∂_r + l(l+n-1)/sinh²r - s(n-s) + V(r)] u = 0

has the outgoing-normalized solution v^k(s;r) equal to the free solution
(sinh r)^{-(n-1)/2} **Q**^k_ν(cosh r) for r ≥ r0.  The connection
coefficient F^k(s) = lim_{r→0} r^{l+n-1} v^k(s;r) encodes resonances (its
zeros) and the relative scattering matrix eigenvalues

    Λ_k(s) = [F^k(n-s)/F^k(s)] · [F^k_0(s)/F^k_0(n-s)],

with the free coefficient F^k_0(s) = 2^{k-1}Γ(k)/Γ(k+s-(n-1)/2).

Three routes to F^k are implemented and cross-validated:
  step closed form   F^k = 2^{k-1}Γ(k) sinh²(r0) · W_z[**Q**^k_ν, P^{-k}_ω]
                     at z = cosh r0, ω(s) = -1/2 + √((s-n/2)²+c)
  ODE                integrate the substituted equation w = v·(sinh r)^{(n-1)/2}
                     inward from r0 and project on the free basis near 0
  Volterra series    successive approximation of the integral equation,
                     convergent for k large

Everything is carried in log form; only ratios are exponentiated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma, roots_legendre

from .logspace import LOG_ZERO, log_add, log_sum
from .phase import rho_curve
from .potentials import Potential, StepProfile, multiplicity
from .special.legendre import DEFAULT_CONFIG, legendre_batch


class LatticeGuardError(ValueError):
    """Evaluation too close to a Γ-lattice singularity to be trusted."""


class MatchingFailure(RuntimeError):
    """ODE projection on the free basis was too ill-conditioned."""


class SeriesDivergent(RuntimeError):
    """The successive-approximation series does not converge at this k."""


def mode_order(n: int, l: int) -> float:
    return l + (n - 1) / 2.0


# ---------------------------------------------------------------------------
# free coefficient
# ---------------------------------------------------------------------------

def log_f0_normalized(n: int, l: int, s):
    """log of F^k_0(s)/(2^{k-1}Γ(k)) = 1/Γ(k+s-(n-1)/2).

    The s-independent prefactor 2^{k-1}Γ(k) degenerates at k = 0 (n = 1,
    l = 0) and cancels from every ratio, so the normalized form is the
    one carried everywhere.  Zeros (Γ poles) land at s = -l - m, m ≥ 0.
    """
    s = np.asarray(s, dtype=complex)
    k = mode_order(n, l)
    arg = k + s - (n - 1) / 2.0
    out = -loggamma(arg)
    bad = ~np.isfinite(out)
    if np.any(bad):
        out = np.where(bad, LOG_ZERO + 0j, out)
    if out.ndim == 0:
        return complex(out)
    return out


def f0_zero_locations(n: int, l: int, t_max: float):
    """Exact zeros of F^k_0 inside |s - n/2| ≤ t_max: s = -l - m."""
    out = []
    m = 0
    while abs(-l - m - n / 2.0) <= t_max:
        out.append(-l - m)
        m += 1
    return out


# ---------------------------------------------------------------------------
# step potential closed form
# ---------------------------------------------------------------------------

def step_omega(n: int, c: complex, s):
    """Shifted interior degree ω(s) = -1/2 + √((s-n/2)² + c).

    The principal square root keeps Re ω ≥ -1/2; results are invariant
    under the branch flip ω ↦ -1-ω by the P-degree reflection.
    """
    s = np.asarray(s, dtype=complex)
    return -0.5 + np.sqrt((s - n / 2.0) ** 2 + c)


def log_w_step(pot: Potential, l: int, s, cfg=DEFAULT_CONFIG):
    """(log W, log scale) for the step-potential Wronskian

        W(s) = [**Q**^k_ν ∂_r P^{-k}_ω - ∂_r **Q**^k_ν P^{-k}_ω](r0).

    W is entire in s and vanishes exactly at the mode's resonances and
    eigenvalue points; `scale` is the magnitude of the larger Wronskian
    term, so exp(Re(log W - log scale)) is a normalized residual.
    """
    if not isinstance(pot.profile, StepProfile):
        raise ValueError("log_w_step requires a step potential")
    n, r0 = pot.n, pot.r0
    k = mode_order(n, l)
    s = np.asarray(s, dtype=complex)
    nu = s - (n + 1) / 2.0
    om = step_omega(n, pot.profile.c, s)
    _, _, lq, ldq = legendre_batch(k, nu, np.full(s.shape, r0), cfg, need="q")
    lp, ldp, _, _ = legendre_batch(k, om, np.full(s.shape, r0), cfg, need="p")
    t1 = lq + ldp
    t2 = ldq + lp + 1j * np.pi
    log_w = log_sum(np.stack([t1, t2], axis=-1), axis=-1)
    log_scale = np.maximum(np.asarray(t1).real, np.asarray(t2).real)
    return log_w, log_scale


def log_f_ratio_step(pot: Potential, l: int, s, cfg=DEFAULT_CONFIG):
    """log of F^k(s)/F^k_0(s) for a step potential (vectorized)."""
    n, r0 = pot.n, pot.r0
    k = mode_order(n, l)
    s = np.asarray(s, dtype=complex)
    log_w, _ = log_w_step(pot, l, s, cfg)
    nu = s - (n + 1) / 2.0
    return log_w + loggamma(k + nu + 1.0) + np.log(np.sinh(r0))


# ---------------------------------------------------------------------------
# ODE route (any radial profile)
# ---------------------------------------------------------------------------

_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


def _integrate_mode_ode(pot: Potential, k: float, nu: complex, r_start: float,
                        r_end: float, y0, rtol: float):
    """Dormand-Prince 5(4) march of w'' = -coth r w' + [ν(ν+1)+k²/sinh²r+V] w
    from r_start down to r_end, renormalizing to dodge overflow.

    Returns (w, w', log_scale): true values are (w, w')·exp(log_scale).
    """
    v_of = pot.value

    def rhs(r, y):
        w, wp = y
        coth = math.cosh(r) / math.sinh(r)
        s2 = math.sinh(r) ** 2
        return np.array(
            [wp, -coth * wp + (nu * (nu + 1.0) + k * k / s2 + v_of(r)) * w],
            dtype=complex,
        )

    y = np.asarray(y0, dtype=complex)
    log_scale = 0.0
    r = r_start
    h = -(r_start - r_end) / 50.0
    h = max(h, -0.05)
    min_step = 1e-12
    while r > r_end + 1e-14:
        if r + h < r_end:
            h = r_end - r
        ks = []
        for i in range(7):
            yi = y.copy()
            for j, aij in enumerate(_DP_A[i]):
                yi = yi + h * aij * ks[j]
            ks.append(rhs(r + _DP_C[i] * h, yi))
        y5 = y + h * sum(b * kk for b, kk in zip(_DP_B5, ks))
        y4 = y + h * sum(b * kk for b, kk in zip(_DP_B4, ks))
        sc = np.maximum(np.abs(y5), np.abs(y))
        sc = np.where(sc == 0, 1.0, sc)
        err = float(np.max(np.abs(y5 - y4) / sc)) / rtol
        if err <= 1.0 or abs(h) <= min_step:
            r += h
            y = y5
            m = float(np.max(np.abs(y)))
            if m > 1e120 or (0 < m < 1e-120):
                y = y / m
                log_scale += math.log(m)
        factor = 0.9 * err ** (-0.2) if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        if abs(h) < min_step:
            h = -min_step
    return y[0], y[1], log_scale


def log_f_ratio_ode(
    pot: Potential,
    l: int,
    s: complex,
    r_min: float | None = None,
    rtol: float = 1e-11,
    cfg=DEFAULT_CONFIG,
):
    """log of F^k(s)/F^k_0(s) by inward integration and Wronskian projection.

    The solution starting as **Q**-free data at r0 is projected on the
    free basis using the exact free Wronskian
    W_r[P, **Q**] = -1/(Γ(ν+k+1) sinh r):

        F^k/F^k_0 = -Γ(ν+k+1) sinh(r) · (P w' - ∂_rP w)(r),  r → 0.

    With V bounded near 0 the projection carries an O(r²) bias, removed
    by Richardson extrapolation between r_min and r_min/2.
    """
    n, r0 = pot.n, pot.r0
    k = mode_order(n, l)
    s = complex(s)
    nu = s - (n + 1) / 2.0
    if r_min is None:
        # small orders have slowly separating indicial exponents (log terms
        # at k = 0), so the projection must happen much closer to r = 0
        r_min = max(min(r0 / 10.0, 2e-2) * (1.0 if k >= 3 else 0.05), 1e-3)

    lq0 = legendre_batch(k, np.array([nu]), np.array([r0]), cfg)
    log_q, log_dq = complex(lq0[2][0]), complex(lq0[3][0])
    # march scaled by e^{-log_q} so the state starts at O(1)
    y0 = (1.0 + 0j, np.exp(log_dq - log_q))
    lg = complex(loggamma(nu + k + 1.0))

    def project(rr, state, log_scale):
        w, wp = state
        lpm = legendre_batch(k, np.array([nu]), np.array([rr]), cfg)
        log_p, log_dp = complex(lpm[0][0]), complex(lpm[1][0])
        t1 = log_p + np.log(wp) if wp != 0 else LOG_ZERO
        t2 = log_dp + np.log(w) + 1j * np.pi if w != 0 else LOG_ZERO
        log_proj = complex(log_add(t1, t2))
        cond = math.exp(min(max(np.real(t1), np.real(t2)) - np.real(log_proj), 700.0))
        if not np.isfinite(log_proj) or cond > 1e9:
            raise MatchingFailure(
                f"matching failure at r_min={rr}: condition ~ {cond:.2e}"
            )
        return lg + np.log(np.sinh(rr)) + 1j * np.pi + log_proj + log_scale + log_q

    w, wp, sc = _integrate_mode_ode(pot, k, nu, r0, r_min, y0, rtol)
    log_r1 = project(r_min, (w, wp), sc)
    w2, wp2, sc2 = _integrate_mode_ode(pot, k, nu, r_min, r_min / 2.0, (w, wp), rtol)
    log_r2 = project(r_min / 2.0, (w2, wp2), sc2 + sc)
    # h² Richardson on the ratio, done at the scale of log_r2
    val = (4.0 * np.exp(log_r2 - log_r2.real) - np.exp(log_r1 - log_r2.real)) / 3.0
    return complex(np.log(val) + log_r2.real)


# ---------------------------------------------------------------------------
# Volterra successive approximations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VolterraResult:
    """Ratios F^k_j/F^k_0, their partial sums, and the summed ratio."""

    ratios: np.ndarray
    partial_sums: np.ndarray
    total: complex
    converged: bool


def _gauss_grid(r0: float, panels: int, per_panel: int = 8):
    x, w = roots_legendre(per_panel)
    edges = np.linspace(0.0, r0, panels + 1)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def volterra_coefficients(
    pot: Potential,
    l: int,
    s: complex,
    j_max: int = 8,
    panels: int | None = None,
    cfg=DEFAULT_CONFIG,
) -> VolterraResult:
    """Iterates of the radial integral equation, normalized by F^k_0.

    The kernel is separable in the free pair, so each sweep is a dense
    quadrature product on a shared grid.  All grid quantities are scaled
    by the free outgoing solution, which keeps every entry O(1):

        x_j(r) := w_j(r)/**Q**(cosh r),   x_0 ≡ 1,
        x_{j+1}(r) = ∫_r^{r0} sinh t V(t) [g(t) - g(r) ρ(t,r)²] x_j(t) dt,
        F_{j+1}/F_0 = ∫_0^{r0} sinh t V(t) g(t) x_j(t) dt,

    with g = Γ(ν+k+1)·P·**Q** (bounded) and ρ(t,r) = **Q**(t)/**Q**(r)
    (|ρ| ≤ 1 for t ≥ r).
    """
    n, r0 = pot.n, pot.r0
    k = mode_order(n, l)
    s = complex(s)
    nu = s - (n + 1) / 2.0
    if panels is None:
        panels = max(64, int(4 * k))
    t, wt = _gauss_grid(r0, panels)

    log_p, _, log_q, _ = legendre_batch(k, np.full(t.shape, nu), t, cfg)
    lg = complex(loggamma(nu + k + 1.0))
    g = np.exp(lg + log_p + log_q)
    v_t = pot.value(t)
    base = wt * np.sinh(t) * v_t

    # rho2[i, j] = (Q(t_j)/Q(t_i))², kept only on the upper triangle
    # t_j >= t_i where |rho| <= 1; the discarded triangle overflows
    lq = np.asarray(log_q)
    upper = t[None, :] >= t[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        rho2 = np.exp(np.where(upper, 2.0 * (lq[None, :] - lq[:, None]), 0.0))
        kernel = np.where(upper, (g[None, :] - g[:, None] * rho2) * base[None, :], 0.0)

    x = np.ones_like(t, dtype=complex)
    ratios = []
    for j in range(1, j_max + 1):
        ratios.append(np.sum(base * g * x))
        x = kernel @ x
    ratios = np.array(ratios)

    partial = np.cumsum(ratios)
    total_mag = abs(1.0 + partial[-1])
    # the iterated series is entire in principle, but usable only when it
    # has settled within the computed terms: trailing term negligible and
    # the tail decaying
    mags = np.abs(ratios)
    settled = mags[-1] < 1e-6 * max(total_mag, 1e-300) and (
        len(mags) < 2 or mags[-1] <= mags[-2]
    )
    if not settled or not np.all(np.isfinite(mags)):
        raise SeriesDivergent(f"series divergent at this k={k}")
    converged = True
    total = 1.0 + partial[-1]
    return VolterraResult(
        ratios=ratios,
        partial_sums=1.0 + partial,
        total=complex(total),
        converged=converged,
    )


# ---------------------------------------------------------------------------
# dispatch, matrix elements, mode sum
# ---------------------------------------------------------------------------

def log_f_ratio(pot: Potential, l: int, s, method: str = "auto", cfg=DEFAULT_CONFIG):
    """log of F^k(s)/F^k_0(s); step potentials use the closed form."""
    if method == "auto":
        method = "step" if isinstance(pot.profile, StepProfile) else "ode"
    if method == "step":
        return log_f_ratio_step(pot, l, s, cfg)
    if method == "ode":
        s_arr = np.asarray(s, dtype=complex)
        if s_arr.ndim == 0:
            return log_f_ratio_ode(pot, l, complex(s_arr), cfg=cfg)
        return np.array([log_f_ratio_ode(pot, l, complex(x), cfg=cfg) for x in s_arr])
    if method == "volterra":
        res = volterra_coefficients(pot, l, complex(s), cfg=cfg)
        return complex(np.log(res.total))
    raise ValueError(f"unknown method {method!r}")


def lambda_mode_log(
    pot: Potential, l: int, s, guard: float = 1e-6, method: str = "auto", cfg=DEFAULT_CONFIG
):
    """log Λ_k(s) = log[F^k(n-s)/F^k_0(n-s)] - log[F^k(s)/F^k_0(s)].

    The s-independent normalizations cancel exactly, so only the two
    ratio evaluations enter.  The imaginary part is defined only mod 2π
    (phases accumulate through staged logarithms); the real part is
    exact.  Points within `guard` of the Γ lattice (s - n/2 ∈ ℤ/2 on the
    real axis) are refused.
    """
    n = pot.n
    s_arr = np.asarray(s, dtype=complex)
    half = s_arr - n / 2.0
    near = (np.abs(half.imag) < guard) & (
        np.abs(half.real * 2.0 - np.round(half.real * 2.0)) < 2 * guard
    )
    if np.any(near):
        raise LatticeGuardError("too close to lattice singularity")
    num = log_f_ratio(pot, l, n - s_arr, method, cfg)
    den = log_f_ratio(pot, l, s_arr, method, cfg)
    out = np.asarray(num) - np.asarray(den)
    if out.ndim == 0:
        return complex(out)
    return out


def log_tau_abs(
    pot: Potential,
    s: complex,
    tol: float = 1e-8,
    l_cap: int = 4000,
    cfg=DEFAULT_CONFIG,
):
    """(log|τ(s)|, l_stop): mode sum Σ_l μ_n(l) log|Λ_k(s)|.

    Truncated once the mode order passes the zero curve (k > a/ϱ(θ),
    where Λ_k - 1 decays exponentially) and the last terms fall below
    tol.  Deterministic: modes are summed in increasing l.
    """
    n = pot.n
    s = complex(s)
    if pot.is_zero:
        return 0.0, 0
    z = s - n / 2.0
    a, theta = abs(z), abs(math.atan2(z.imag, z.real))
    theta = min(theta, math.pi / 2.0)
    k_crit = a / rho_curve(theta, pot.r0) if a > 0 else 0.0

    total = 0.0
    small_run = 0
    l = 0
    while l <= l_cap:
        k = mode_order(n, l)
        term = multiplicity(n, l) * float(np.real(lambda_mode_log(pot, l, s, cfg=cfg)))
        total += term
        if k > k_crit and abs(term) < tol / 8.0:
            small_run += 1
            if small_run >= 3:
                return total, l
        else:
            small_run = 0
        l += 1
    return total, l_cap


def log_tau_abs_batch(pot, s_values, tol=1e-8, cfg=DEFAULT_CONFIG):
    """Vectorized log|τ| over an array of s (shared mode loop)."""
    s_values = np.asarray(s_values, dtype=complex)
    if pot.is_zero:
        return np.zeros(s_values.shape), np.zeros(s_values.shape, dtype=int)
    n = pot.n
    z = s_values - n / 2.0
    a = np.abs(z)
    theta = np.minimum(np.abs(np.arctan2(z.imag, z.real)), np.pi / 2.0)
    k_crit = np.array(
        [aa / rho_curve(float(th), pot.r0) if aa > 0 else 0.0 for aa, th in zip(a, theta)]
    )
    total = np.zeros(s_values.shape)
    l_stop = np.zeros(s_values.shape, dtype=int)
    small_run = np.zeros(s_values.shape, dtype=int)
    active = np.ones(s_values.shape, dtype=bool)
    l = 0
    while np.any(active) and l <= 4000:
        k = mode_order(n, l)
        idx = np.nonzero(active)[0]
        terms = multiplicity(n, l) * np.real(
            lambda_mode_log(pot, l, s_values[idx], cfg=cfg)
        )
        total[idx] += terms
        done_k = k > k_crit[idx]
        small = np.abs(terms) < tol / 8.0
        small_run[idx] = np.where(done_k & small, small_run[idx] + 1, 0)
        finished = small_run[idx] >= 3
        l_stop[idx[finished]] = l
        active[idx[finished]] = False
        l += 1
    l_stop[active] = l
    return total, l_stop
