"""Associated Legendre functions of complex degree on the cut (1, ∞).

Evaluates P^{-k}_ν(cosh r) and the Olver-normalized second solution
**Q**^k_ν(cosh r) = e^{-iπk} Q^k_ν(cosh r) / Γ(ν+k+1), together with
r-derivatives, for real half-integer order k ≥ 0 and arbitrary complex
degree ν.  All values are produced in log form (log-magnitude + phase),
since magnitudes range over hundreds of orders in the working regime.

Evaluation strategies
---------------------
ascending series   P only; small r or moderate |ν|; direct 2F1 sum.
order recurrence   the workhorse.  Q^μ grows rapidly in μ, so upward
                   three-term recurrence from elementary (half-integer k)
                   or hypergeometric (integer k) seeds is stable.  P^{-μ}
                   is recessive in μ, so it is generated by a downward
                   Miller-style sweep normalized against elementary or
                   quadrature seeds at the bottom order.
mpmath             arbitrary-precision fallback and cross-check oracle.

Degrees with Re ν < -1/2 are first reduced by the reflection identities
P^{-k}_{-1-ν} = P^{-k}_ν and the **Q** connection formula, so the kernels
always run with Re ν ≥ -1/2.  Every batch is verified against the
Wronskian identity  P·∂_r**Q** - ∂_rP·**Q** = -1/(Γ(ν+k+1) sinh r);
entries that fail are transparently recomputed with mpmath.

Useful contiguous relations (argument z = cosh r, verified numerically
against mpmath; same relations hold for Q^μ):

    P^{μ+1}_ν = -2μ z (z²-1)^{-1/2} P^μ_ν + (ν+μ)(ν-μ+1) P^{μ-1}_ν
    ∂_r P^{-k}_ν = (ν-k)(ν+k+1) P^{-(k+1)}_ν + k coth(r) P^{-k}_ν
    ∂_r Q^{k}_ν  = Q^{k+1}_ν + k coth(r) Q^{k}_ν
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.special import loggamma, roots_legendre

from ..logspace import LOG_ZERO, log_add, log_sum
from .gamma import recip_gamma_log


class PrecisionExhausted(ArithmeticError):
    """All evaluation strategies lost too much significance."""


@dataclass(frozen=True)
class EvalConfig:
    """Empirical strategy thresholds; see README for the calibration runs."""

    r_max: float = 5.0
    #: extra downward-recurrence headroom above max(k, |ν+1/2|)
    miller_extra: int = 64
    miller_extra_slope: float = 0.55
    #: beyond this radius the P recurrence loses its contamination damping
    #: (the two solutions' growth rates converge) and the Laplace-integral
    #: route takes over
    r_miller_max: float = 1.6
    #: integer-order Q seeds use the 1/z² series only for r above this
    q_seed_r_min: float = 0.42
    #: and for |ν| below this
    q_seed_nu_max: float = 160.0
    #: relative Wronskian residual beyond which an entry is redone in mpmath
    wronskian_tol: float = 1e-7
    #: decimal digits of reflection cancellation tolerated in double precision
    reflection_loss_digits: float = 7.5


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class LegendrePair:
    """P^{-k}_ν(cosh r), **Q**^k_ν(cosh r) and their r-derivatives.

    Plain complex fields may overflow to inf for extreme parameters; the
    log_* fields are always finite and are what downstream solvers use.
    """

    p_value: complex
    q_value: complex
    p_deriv_r: complex
    q_deriv_r: complex
    log_p: complex
    log_q: complex
    log_p_deriv_r: complex
    log_q_deriv_r: complex
    strategy: str = "recurrence"


# ---------------------------------------------------------------------------
# elementary half-integer seeds
# ---------------------------------------------------------------------------

def _sinhc(w):
    """sinh(w)/w, stable near w = 0."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-6
    ws = np.where(small, 1.0, w)
    return np.where(small, 1.0 + w * w / 6.0, np.sinh(ws) / ws)


def _seed_p_half(nu, r):
    """(P^{-1/2}_ν, P^{-3/2}_ν) at cosh r; second entry nan at its poles."""
    b = nu + 0.5
    pref = np.sqrt(2.0 / (np.pi * np.sinh(r)))
    p_mhalf = pref * r * _sinhc(b * r)
    p_phalf = pref * np.cosh(b * r)
    den = (nu - 0.5) * (nu + 1.5)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_m3half = (p_phalf - (np.cosh(r) / np.sinh(r)) * p_mhalf) / den
    p_m3half = np.where(np.abs(den) < 1e-8, np.nan, p_m3half)
    return p_mhalf, p_m3half


def _seed_q_half_logs(nu, r):
    """(log Q^{-1/2}_ν, log Q^{1/2}_ν), unnormalized Q, elementary forms."""
    b = nu + 0.5
    base = 0.5 * np.log(np.pi / (2.0 * np.sinh(r))) - b * r
    log_q_half = base + 1j * (np.pi / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_q_mhalf = base - 1j * (np.pi / 2.0) - np.log(b)
    log_q_mhalf = np.where(np.abs(b) < 1e-300, np.nan + 0j, log_q_mhalf)
    return log_q_mhalf, log_q_half


# ---------------------------------------------------------------------------
# quadrature seed for integer-order P (Laplace-type integral)
# ---------------------------------------------------------------------------

_NODE_CACHE: dict = {}


def _clustered_nodes(npan: int, nper: int):
    key = (npan, nper)
    if key not in _NODE_CACHE:
        x, w = roots_legendre(nper)
        edges = 0.5 * np.pi * np.linspace(0.0, 1.0, npan + 1) ** 1.5
        mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
        t1 = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        w1 = (half[:, None] * w[None, :]).ravel()
        _NODE_CACHE[key] = (
            np.concatenate([t1, np.pi - t1[::-1]]),
            np.concatenate([w1, w1[::-1]]),
        )
    return _NODE_CACHE[key]


def _log_p_laplace_pair(nu, r: float, mu: float = 0.0):
    """(log P^{-μ}_ν, log P^{-(μ+1)}_ν) at cosh r from

        P^{-μ}_ν(x) = (x²-1)^{μ/2} / (2^μ √π Γ(μ+1/2))
                      ∫_0^π (x + √(x²-1) cos t)^{ν-μ} sin^{2μ}t dt,

    with the max of Re(exponent) factored out; both orders share one
    evaluation of the exponential.  Used for the integer-order recurrence
    seeds (μ = 0) and as the whole P route at radii where the downward
    recurrence loses its damping; the oscillatory cancellation is mild
    for small and moderate μ and caught by the Wronskian check beyond.
    """
    nu = np.asarray(nu, dtype=complex)
    amax = float(np.max(np.abs(nu + 0.5))) if nu.size else 1.0
    # panel count tracks the oscillation budget |Im ν| · 2r plus a floor
    t, wt = _clustered_nodes(14 + int(0.16 * amax * max(r, 0.3)), 16)
    ch, sh = np.cosh(r), np.sinh(r)
    logb = np.log(ch + sh * np.cos(t))
    logsin = np.log(np.sin(t))
    g = (nu[..., None] - mu) * logb + 2.0 * mu * logsin
    m = g.real.max(axis=-1, keepdims=True)
    e = np.exp(g - m)
    s0 = np.sum(wt * e, axis=-1)
    factor = np.exp(2.0 * logsin - logb)
    s1 = np.sum((wt * factor) * e, axis=-1)
    base = mu * (np.log(sh) - np.log(2.0)) - 0.5 * np.log(np.pi) + m[..., 0]
    log0 = base - loggamma(mu + 0.5) + np.log(s0)
    log1 = base + np.log(sh) - np.log(2.0) - loggamma(mu + 1.5) + np.log(s1)
    return log0, log1


# ---------------------------------------------------------------------------
# hypergeometric seed for integer-order Q (series in 1/cosh² r)
# ---------------------------------------------------------------------------

def _log_q_hyp_seed(nu, mu: float, r: float, max_terms: int = 2000):
    """log Q^μ_ν(cosh r) (unnormalized Q) via

        **Q**^μ_ν(z) = √π (z²-1)^{μ/2} z^{-ν-μ-1} / (2^{ν+1} Γ(ν+3/2))
                       · 2F1((ν+μ+1)/2, (ν+μ+2)/2; ν+3/2; z^{-2}).

    Returns (log values, ok mask); entries whose series failed to converge
    or lost too much significance are flagged for the mpmath fallback.
    """
    nu = np.asarray(nu, dtype=complex)
    z = np.cosh(r)
    w = 1.0 / (z * z)
    a = (nu + mu + 1) / 2.0
    b = (nu + mu + 2) / 2.0
    c = nu + 1.5
    term = np.ones_like(nu)
    total = term.copy()
    peak = np.abs(term)
    done = np.zeros(nu.shape, dtype=bool)
    for j in range(max_terms):
        term = term * ((a + j) * (b + j)) / ((c + j) * (1.0 + j)) * w
        total = np.where(done, total, total + term)
        peak = np.maximum(peak, np.abs(term))
        done |= np.abs(term) <= 1e-18 * np.abs(total)
        if done.all():
            break
    ok = done & (peak <= 1e5 * np.abs(total)) & (np.abs(total) > 0)
    log_f = np.log(np.where(ok, total, 1.0))
    log_bold_q = (
        0.5 * np.log(np.pi)
        + (mu / 2.0) * np.log(z * z - 1.0)
        + (-nu - mu - 1.0) * np.log(z)
        - (nu + 1.0) * np.log(2.0)
        - loggamma(nu + 1.5)
        + log_f
    )
    # unnormalized Q^μ = e^{iπμ} Γ(ν+μ+1) **Q**^μ
    return log_bold_q + loggamma(nu + mu + 1.0) + 1j * np.pi * mu, ok


# ---------------------------------------------------------------------------
# mpmath oracle / fallback
# ---------------------------------------------------------------------------

def _near_gamma_pole(g, width: float = 0.05) -> bool:
    if g.real > 0.5 or abs(g.imag) > width:
        return False
    n = round(g.real)
    return n <= 0 and abs(g - n) < width


def _mp_pair_logs(k: float, nu: complex, r: float, dps: int = 30):
    """(log P, log ∂_rP, log **Q**, log ∂_r**Q**) via mpmath.

    Derivatives come from the contiguous relations, not finite differences.
    Near poles of Γ(ν+k+1), where legenq is 0·∞, **Q** is assembled from
    the reflection connection formula (entire in ν) instead.  Results are
    memoized on disk when HYPERRES_CACHE is set.
    """
    from .. import cache

    key = cache.mp_key(k, complex(nu), r, dps)
    hit = cache.get(key)
    if hit is not None:
        return hit
    with mp.workdps(dps):
        nu_m = mp.mpc(nu)
        z = mp.cosh(mp.mpf(r))
        sh = mp.sinh(mp.mpf(r))
        coth = z / sh

        def p_fn(order, deg):
            return mp.legenp(deg, -mp.mpf(order), z, type=3)

        def bold_q(order, deg):
            order = mp.mpf(order)
            g = deg + order + 1
            if _near_gamma_pole(complex(g)):
                refl = (
                    mp.e ** (-1j * mp.pi * order)
                    * mp.legenq(-1 - deg, order, z, type=3)
                    / mp.gamma(order - deg)
                )
                return (
                    -mp.gamma(order - deg) * mp.cos(deg * mp.pi) * p_fn(order, deg)
                    + mp.gamma(order - deg) * mp.rgamma(g) * refl
                )
            return mp.e ** (-1j * mp.pi * order) * mp.legenq(deg, order, z, type=3) / mp.gamma(g)

        p_k = p_fn(k, nu_m)
        p_k1 = p_fn(k + 1, nu_m)
        dp = (nu_m - k) * (nu_m + k + 1) * p_k1 + k * coth * p_k
        bq_k = bold_q(k, nu_m)
        bq_k1 = bold_q(k + 1, nu_m)
        dq = -(nu_m + k + 1) * bq_k1 + k * coth * bq_k

        out = []
        for v in (p_k, dp, bq_k, dq):
            out.append(complex(LOG_ZERO) if v == 0 else complex(mp.log(v)))
    cache.put(key, tuple(out))
    return tuple(out)


# ---------------------------------------------------------------------------
# vectorized recurrence kernels (canonical domain Re ν >= -1/2)
# ---------------------------------------------------------------------------

def _renorm(values, scale, limit=1e120):
    # growth per recurrence step is polynomial, so checking every few
    # steps cannot overflow between checks
    mag = np.abs(values[0])
    big = (mag > limit) | ((mag < 1.0 / limit) & (mag > 0))
    if np.any(big):
        f = np.where(big, mag, 1.0)
        values = [v / f for v in values]
        scale = scale + np.where(big, np.log(f), 0.0)
    return values, scale


def _safe_log(v):
    return np.where(v == 0, LOG_ZERO + 0j, np.log(np.where(v == 0, 1.0, v)))


def _p_chain_logs(k: float, nu, r, cfg: EvalConfig):
    """(log P^{-k}, log P^{-(k+1)}) by downward recurrence (Miller start).

    A_{μ-1} = 2μ coth(r) A_μ + (ν-μ)(ν+μ+1) A_{μ+1},  A_μ = P^{-μ}_ν.
    nu and r are flat same-length arrays.  Radii beyond r_miller_max
    evaluate through the Laplace integral instead: there the recurrence's
    two solutions grow at nearly equal rates and the Miller sweep stops
    purging its seed contamination.
    """
    big_r = r > cfg.r_miller_max
    if np.any(big_r):
        log_pk = np.empty(nu.shape, dtype=complex)
        log_pk1 = np.empty(nu.shape, dtype=complex)
        for rr in np.unique(r[big_r]):
            m = r == rr
            log_pk[m], log_pk1[m] = _log_p_laplace_pair(nu[m], float(rr), mu=k)
        if np.all(big_r):
            return log_pk, log_pk1
        small = ~big_r
        a, b = _p_chain_logs(k, nu[small], r[small], cfg)
        log_pk[small], log_pk1[small] = a, b
        return log_pk, log_pk1

    coth = np.cosh(r) / np.sinh(r)
    mu0 = float(k) % 1.0
    amax = float(np.max(np.abs(nu + 0.5))) if nu.size else 1.0
    extra = cfg.miller_extra + int(np.ceil(cfg.miller_extra_slope * max(amax, k)))
    nsteps = int(np.ceil(max(k, amax) + extra - mu0))
    mu_top = mu0 + nsteps

    v_up = np.zeros(nu.shape, dtype=complex)
    v = np.full(nu.shape, 1e-280, dtype=complex)
    scale = np.zeros(nu.shape, dtype=float)
    kept = {}
    want = {round(2 * x) for x in (k, k + 1, mu0, mu0 + 1)}
    mu = mu_top
    steps = 0
    while True:
        key = round(2 * mu)
        if key in want:
            kept[key] = (v.copy(), scale.copy())
        if mu <= mu0 + 1e-9:
            break
        v_new = 2.0 * mu * coth * v + (nu - mu) * (nu + mu + 1.0) * v_up
        v_up, v = v, v_new
        mu -= 1.0
        steps += 1
        if steps % 8 == 0 or key in want:
            (v, v_up), scale = _renorm([v, v_up], scale)

    if abs(mu0 - 0.5) < 1e-12:
        ref0, ref1 = _seed_p_half(nu, r)
        log_ref0 = _safe_log(ref0)
        log_ref1 = _safe_log(np.where(np.isnan(ref1), 0.0, ref1))
    else:
        log_ref0 = np.empty(nu.shape, dtype=complex)
        log_ref1 = np.empty(nu.shape, dtype=complex)
        for rr in np.unique(r):
            m = r == rr
            log_ref0[m], log_ref1[m] = _log_p_laplace_pair(nu[m], float(rr))

    v0, s0 = kept[round(2 * mu0)]
    v1, s1 = kept[round(2 * (mu0 + 1))]
    log_c0 = log_ref0 - (_safe_log(v0) + s0)
    log_c1 = log_ref1 - (_safe_log(v1) + s1)
    # normalize against the larger reference (dodges elementary-seed zeros)
    use0 = np.real(log_ref0) >= np.real(log_ref1)
    log_c = np.where(use0, log_c0, log_c1)

    vk, sk = kept[round(2 * k)]
    vk1, sk1 = kept[round(2 * (k + 1))]
    return _safe_log(vk) + sk + log_c, _safe_log(vk1) + sk1 + log_c


def _q_chain_logs(k: float, nu, r, cfg: EvalConfig):
    """(log Q^k, log Q^{k+1}, ok) unnormalized Q, upward recurrence.

    Q^{μ+1} = -2μ coth(r) Q^μ + (ν+μ)(ν-μ+1) Q^{μ-1}.
    nu and r are flat same-length arrays.
    """
    coth = np.cosh(r) / np.sinh(r)
    mu0 = float(k) % 1.0
    ok = np.ones(nu.shape, dtype=bool)

    if abs(mu0 - 0.5) < 1e-12:
        log_prev, log_cur = _seed_q_half_logs(nu, r)
        bad = ~np.isfinite(log_prev)
        ok &= ~bad
        log_prev = np.where(bad, 0.0, log_prev)
        mu = 0.5
    else:
        log_prev = np.zeros(nu.shape, dtype=complex)
        log_cur = np.zeros(nu.shape, dtype=complex)
        nu_ok = np.abs(nu) <= cfg.q_seed_nu_max
        for rr in np.unique(r):
            m = r == rr
            if float(rr) < cfg.q_seed_r_min:
                ok[m] = False
                continue
            sel = m & nu_ok
            if np.any(sel):
                lp, ok0 = _log_q_hyp_seed(nu[sel], 0.0, float(rr))
                lc, ok1 = _log_q_hyp_seed(nu[sel], 1.0, float(rr))
                log_prev[sel], log_cur[sel] = lp, lc
                ok[sel] &= ok0 & ok1
            ok[m & ~nu_ok] = False
        mu = 1.0
        if k == 0:
            return log_prev, log_cur, ok

    prev = np.exp(log_prev - log_cur.real)
    cur = np.exp(1j * log_cur.imag)
    scale = log_cur.real.astype(float).copy()
    steps = 0
    while mu < k - 1e-9:
        nxt = -2.0 * mu * coth * cur + (nu + mu) * (nu - mu + 1.0) * prev
        prev, cur = cur, nxt
        mu += 1.0
        steps += 1
        if steps % 8 == 0:
            (cur, prev), scale = _renorm([cur, prev], scale)
    nxt = -2.0 * mu * coth * cur + (nu + mu) * (nu - mu + 1.0) * prev
    return _safe_log(cur) + scale, _safe_log(nxt) + scale, ok


def _p_part(k, nu, r, cfg):
    coth = np.cosh(r) / np.sinh(r)
    log_pk, log_pk1 = _p_chain_logs(k, nu, r, cfg)
    cf = (nu - k) * (nu + k + 1.0)
    term_k = np.log(k * coth) + log_pk if k > 0 else np.full(nu.shape, LOG_ZERO + 0j)
    log_dp = log_add(_safe_log(cf) + log_pk1, term_k)
    return log_pk, np.asarray(log_dp)


def _q_part(k, nu, r, cfg):
    coth = np.cosh(r) / np.sinh(r)
    log_qk, log_qk1, q_ok = _q_chain_logs(k, nu, r, cfg)
    lg = loggamma(nu + k + 1.0)
    log_q = log_qk - lg - 1j * np.pi * k
    term_qk = np.log(k * coth) + log_qk if k > 0 else np.full(nu.shape, LOG_ZERO + 0j)
    log_dq = np.asarray(log_add(log_qk1, term_qk)) - lg - 1j * np.pi * k
    return log_q, log_dq, q_ok


def _sentinel_indices(size: int):
    # small batches are refinement iterates in regions the bigger sweeps
    # already validated; spot-checking only large batches keeps the oracle
    # cost negligible
    if size < 32:
        return []
    return sorted({0, size // 3, (2 * size) // 3, size - 1})


def _batch_canonical(k: float, nu, r, cfg: EvalConfig, need: str = "pq"):
    """Log values on flat arrays, Re ν ≥ -1/2.

    need = "pq" returns (P, ∂P, **Q**, ∂**Q**) with a full Wronskian
    verification; "p" / "q" compute one side only and verify a small
    deterministic sentinel subset against the mpmath oracle instead.
    """
    if need == "pq":
        log_pk, log_dp = _p_part(k, nu, r, cfg)
        log_q, log_dq, q_ok = _q_part(k, nu, r, cfg)
        lg = loggamma(nu + k + 1.0)
        # Wronskian verification: P ∂Q - ∂P Q = -1/(Γ(ν+k+1) sinh r)
        log_w_expected = -lg - np.log(np.sinh(r)) + 1j * np.pi
        lw = log_sum(np.stack([log_pk + log_dq, log_dp + log_q + 1j * np.pi], -1), -1)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            resid = np.abs(np.exp(np.asarray(lw) - log_w_expected) - 1.0)
        good = q_ok & (resid < cfg.wronskian_tol)
        if not np.all(good):
            arrays = [log_pk, log_dp, log_q, log_dq]
            for i in np.nonzero(~good)[0]:
                vals = _mp_pair_logs(k, complex(nu[i]), float(r[i]))
                for a, vv in zip(arrays, vals):
                    a[i] = vv
        return log_pk, log_dp, log_q, log_dq

    if need == "p":
        log_pk, log_dp = _p_part(k, nu, r, cfg)
        out = [log_pk, log_dp, None, None]
        sel = (0, 1)
    else:
        log_q, log_dq, q_ok = _q_part(k, nu, r, cfg)
        if not np.all(q_ok):
            for i in np.nonzero(~q_ok)[0]:
                vals = _mp_pair_logs(k, complex(nu[i]), float(r[i]))
                log_q[i], log_dq[i] = vals[2], vals[3]
        out = [None, None, log_q, log_dq]
        sel = (2, 3)
    bad_sentinel = False
    for i in _sentinel_indices(nu.size):
        vals = _mp_pair_logs(k, complex(nu[i]), float(r[i]))
        for j in sel:
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                err = abs(np.exp(complex(out[j][i]) - vals[j]) - 1.0)
            if not err < cfg.wronskian_tol:
                bad_sentinel = True
    if bad_sentinel:
        # distrust the whole split batch; redo with full verification
        return _batch_canonical(k, nu, r, cfg, need="pq")
    return tuple(out)


def legendre_batch(k: float, nu, r, cfg: EvalConfig = DEFAULT_CONFIG, need: str = "pq"):
    """Vectorized log-form evaluation for arbitrary complex degree.

    Returns (log P, log ∂_rP, log **Q**, log ∂_r**Q**) broadcast over nu
    and r; with need = "p" or "q" the other pair is None.  k must be a
    non-negative integer or half-integer.
    """
    if k < 0:
        raise ValueError("order k must be >= 0")
    if abs(2 * k - round(2 * k)) > 1e-9:
        raise ValueError("order k must be an integer or half-integer")
    if need not in ("pq", "p", "q"):
        raise ValueError("need must be 'pq', 'p', or 'q'")
    k = round(2 * k) / 2.0
    nu_in = np.asarray(nu, dtype=complex)
    r_in = np.asarray(r, dtype=float)
    if np.any(r_in <= 0):
        raise ValueError("r must be > 0")
    if np.any(r_in > cfg.r_max):
        raise ValueError(f"r exceeds configured r_max={cfg.r_max}")
    shape = np.broadcast(nu_in, r_in).shape
    nu_f = np.broadcast_to(nu_in, shape).ravel().copy()
    r_f = np.broadcast_to(r_in, shape).ravel().copy()

    refl = nu_f.real < -0.5 - 1e-12
    nu_can = np.where(refl, -1.0 - nu_f, nu_f)
    # the Q connection formula under reflection needs P of the canonical
    # degree, so a q-only request with reflected entries is widened
    eff_need = "pq" if (need == "q" and np.any(refl)) else need
    log_p, log_dp, log_q, log_dq = _batch_canonical(k, nu_can, r_f, cfg, eff_need)
    if need == "p":
        none2 = (None, None)
        return (log_p.reshape(shape), log_dp.reshape(shape)) + none2

    if np.any(refl):
        # **Q**^k_ν = -Γ(k-ν)cos(νπ) P^{-k}_{ν'} + (Γ(k-ν)/Γ(ν+k+1)) **Q**^k_{ν'}
        # for ν' = -1-ν; P and ∂_rP are degree-reflection invariant.
        nr = nu_f[refl]
        log_gkm = loggamma(k - nr)
        log_cos = log_add(1j * np.pi * nr, -1j * np.pi * nr) - np.log(2.0)
        c1 = log_gkm + log_cos + 1j * np.pi
        c2 = log_gkm + recip_gamma_log(nr + k + 1.0)
        t1q, t2q = c1 + log_p[refl], c2 + log_q[refl]
        t1d, t2d = c1 + log_dp[refl], c2 + log_dq[refl]
        lq = np.atleast_1d(log_sum(np.stack([t1q, t2q], -1), -1))
        ldq = np.atleast_1d(log_sum(np.stack([t1d, t2d], -1), -1))
        loss = (np.maximum(t1q.real, t2q.real) - lq.real) / np.log(10.0)
        bad = ~(loss < cfg.reflection_loss_digits)
        if np.any(bad):
            nrb = nr[bad]
            rrb = r_f[refl][bad]
            fix_q = np.empty(nrb.shape, dtype=complex)
            fix_dq = np.empty(nrb.shape, dtype=complex)
            for j in range(nrb.size):
                dps = int(30 + 1.5 * max(0.0, float(loss[bad][j])))
                _, _, vq, vdq = _mp_pair_logs(k, complex(nrb[j]), float(rrb[j]), dps)
                fix_q[j], fix_dq[j] = vq, vdq
            lq[bad] = fix_q
            ldq[bad] = fix_dq
        log_q[refl] = lq
        log_dq[refl] = ldq

    return tuple(
        a.reshape(shape) if a is not None else None
        for a in (log_p, log_dp, log_q, log_dq)
    )


# ---------------------------------------------------------------------------
# ascending series (small-r strategy, P only) and public scalar interface
# ---------------------------------------------------------------------------

def _log_p_series(k: float, nu: complex, r: float, max_terms: int = 600):
    """log P^{-k}_ν(cosh r) from the ascending 2F1 series about r = 0."""
    w = -np.sinh(r / 2.0) ** 2
    a, b, c = -nu, nu + 1.0, 1.0 + k
    term = 1.0 + 0j
    total = term
    peak = 1.0
    for j in range(max_terms):
        term *= (a + j) * (b + j) / ((c + j) * (1.0 + j)) * w
        total += term
        peak = max(peak, abs(term))
        if abs(term) <= 1e-18 * abs(total):
            break
    else:
        raise PrecisionExhausted("ascending series did not converge")
    if peak > 1e6 * abs(total):
        raise PrecisionExhausted("ascending series cancellation")
    return k * np.log(np.tanh(r / 2.0)) - loggamma(1.0 + k) + np.log(total)


def legendre_pair(
    k: float,
    nu: complex,
    r: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    strategy: str = "auto",
) -> LegendrePair:
    """P^{-k}_ν(cosh r), **Q**^k_ν(cosh r) and r-derivatives (scalar).

    strategy: "auto" (recurrence kernel with Wronskian-checked mpmath
    fallback), "series" (ascending P-series, P fields only), or "mpmath".
    """
    nu = complex(nu)
    r = float(r)
    if r <= 0:
        raise ValueError("r must be > 0")
    if strategy == "mpmath":
        if nu.real < -0.5 - 1e-12:
            nu_c = -1.0 - nu
            lp, ldp, lq_c, ldq_c = _mp_pair_logs(k, nu_c, r)
            log_gkm = complex(loggamma(k - nu))
            log_cos = complex(log_add(1j * np.pi * nu, -1j * np.pi * nu)) - np.log(2.0)
            c1 = log_gkm + log_cos + 1j * np.pi
            c2 = log_gkm + complex(recip_gamma_log(nu + k + 1.0))
            lq = complex(log_add(c1 + lp, c2 + lq_c))
            ldq = complex(log_add(c1 + ldp, c2 + ldq_c))
            vals = (lp, ldp, lq, ldq)
        else:
            vals = _mp_pair_logs(k, nu, r)
        used = "mpmath"
    elif strategy == "series":
        lp = complex(_log_p_series(k, nu, r))
        h = 1e-6 * max(r, 1.0)
        dval = (
            np.exp(_log_p_series(k, nu, r + h) - lp)
            - np.exp(_log_p_series(k, nu, min(r - h, r * 0.5) if r > h else r / 2) - lp)
        ) / (2 * h if r > h else (r + h - r / 2))
        ldp = complex(np.log(dval) + lp)
        vals = (lp, ldp, complex(LOG_ZERO), complex(LOG_ZERO))
        used = "series"
    else:
        out = legendre_batch(k, np.array([nu]), np.array([r]), cfg)
        vals = tuple(complex(a[0]) for a in out)
        used = "recurrence"
    lp, ldp, lq, ldq = (complex(v) for v in vals)

    def val(w):
        with np.errstate(over="ignore", under="ignore"):
            return complex(np.exp(w))

    return LegendrePair(
        p_value=val(lp),
        q_value=val(lq),
        p_deriv_r=val(ldp),
        q_deriv_r=val(ldq),
        log_p=lp,
        log_q=lq,
        log_p_deriv_r=ldp,
        log_q_deriv_r=ldq,
        strategy=used,
    )


# ---------------------------------------------------------------------------
# leading-order asymptotic envelopes (validation only, O(1/k) accurate)
# ---------------------------------------------------------------------------

def asymptotic_airy_regime(k: float, alpha: complex, r: float):
    """Leading uniform Airy-model approximations to (log P, log **Q**).

    Valid for k large with arg α ∈ [0, π/2 - ε]; relative error O(1/k).
    Validation envelope only, never an evaluation strategy.
    """
    from ..phase import phase as _phase
    from .airy import log_airy_ai

    pv = _phase(alpha, r)
    zeta = pv.zeta
    pref = (
        (1.0 / 6.0) * np.log(k)
        + 0.25 * np.log(zeta)
        - 0.25 * np.log(1.0 + alpha ** 2 * np.sinh(r) ** 2)
    )
    log_p = (
        np.log(2 * np.sqrt(np.pi))
        - loggamma(k + 1.0)
        + pref
        + 1j * np.pi / 6.0
        - k * pv.p
        + log_airy_ai(k ** (2.0 / 3.0) * np.exp(2j * np.pi / 3.0) * zeta)
    )
    log_q = (
        np.log(2 * np.pi)
        - loggamma(k * alpha + 1.0)
        + pref
        + 0.5 * np.log(alpha / 2.0)
        + k * pv.q
        + log_airy_ai(k ** (2.0 / 3.0) * zeta)
    )
    return complex(log_p), complex(log_q)


def asymptotic_bessel_regime(k: float, nu: complex, r: float):
    """Fixed-order, large-|ν| Bessel approximations to (log P, log **Q**)."""
    from .bessel import bessel_modified

    b = (nu + 0.5) * r
    i_val, k_val = bessel_modified(k, b)
    half = 0.5 * np.log(r / np.sinh(r))
    log_p = -k * np.log(nu) + half + np.log(i_val)
    log_q = k * np.log(nu) - loggamma(k + nu + 1.0) + half + np.log(k_val)
    return complex(log_p), complex(log_q)
