"""Resonance enumeration by argument-principle box subdivision.

Per mode l, resonances are the zeros of the connection coefficient in
the half-plane Re s < n/2.  For a step potential the scanned function is
the entire Wronskian W(s) = [**Q**^k_ν ∂_rP^{-k}_ω - ∂_r**Q**^k_ν P^{-k}_ω](r0)
whose zero set equals that of F^k(s); general profiles scan the ODE
route's log F directly.

The plane is tiled with axis-aligned boxes whose edges snap to the grid
{0.5 m + 0.23} in both coordinates, keeping boundaries clear of the
Γ-lattice points on the real axis where the near-integer resonance family
lives.  Box boundaries are phase-tracked with adaptive sampling (target
phase step < π/2); boxes with nonzero winding shrink until small, then
every zero is polished by damped Newton iterations on log W with the
multiplicity taken from the winding, never from iteration heuristics.

The scan is breadth-first so that all boundary samples of a generation,
across all boxes, evaluate in a single vectorized call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modes import log_f0_normalized, log_f_ratio_ode, log_w_step, mode_order
from .phase import rho_curve
from .potentials import Potential, StepProfile, multiplicity


class BoundaryZeroSuspected(RuntimeError):
    """A zero appears to sit on (or hug) a box boundary."""


class CertificateFailure(RuntimeError):
    """An outer guard mode contributed zeros; mode cutoff too small."""


GRID_OFFSET = 0.23
GRID_PITCH = 0.5


def snap(x: float) -> float:
    """Nearest point of the {0.5 m + 0.23} grid."""
    return GRID_PITCH * round((x - GRID_OFFSET) / GRID_PITCH) + GRID_OFFSET


@dataclass(frozen=True)
class Resonance:
    """One zero of the mode-l connection coefficient.

    For n even, every mode's coefficient has forced simple zeros at the
    non-positive integers s ∈ {-l, -l-1, ...}: the Olver-normalized
    outgoing solution vanishes identically there (Γ(ν+k+1) pole with
    cos(νπ) = 0), for every potential including V = 0.  These cancel
    against the free coefficient in the scattering matrix eigenvalues and
    are not poles of the continued resolvent; they carry
    lattice_artifact = True.  They are retained in the set because the
    plotted and Weyl-fitted zero counts of the step potential include
    them, while the contour identity counts only the spectral subset.
    """

    zeta: complex
    l: int
    zero_order: int
    total_multiplicity: int
    residual: float
    refined: bool = True
    lattice_artifact: bool = False


@dataclass(frozen=True)
class ResonanceSet:
    potential: dict
    n: int
    t_max: float
    resonances: tuple
    l_max_used: int
    certificate: dict
    eigenvalue_side: tuple = ()

    def radii(self):
        return np.array([abs(r.zeta - self.n / 2.0) for r in self.resonances])

    def multiplicities(self):
        return np.array([r.total_multiplicity for r in self.resonances], dtype=int)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("n,l,k,re_s,im_s,zero_order,mu,total_multiplicity,residual\n")
            for rr in self.resonances:
                k = mode_order(self.n, rr.l)
                mu = rr.total_multiplicity // rr.zero_order
                fh.write(
                    f"{self.n},{rr.l},{k:.17g},{rr.zeta.real:.17g},{rr.zeta.imag:.17g},"
                    f"{rr.zero_order},{mu},{rr.total_multiplicity},{rr.residual:.3g}\n"
                )


def _wrap(d):
    return (d + np.pi) % (2.0 * np.pi) - np.pi


# ---------------------------------------------------------------------------
# batched boundary winding
# ---------------------------------------------------------------------------

class _Boundary:
    """Adaptive sample set along one box boundary."""

    __slots__ = ("box", "pts", "vals", "rounds", "dilations")

    def __init__(self, box, spacing):
        self.box = box
        x0, x1, y0, y1 = box
        pts = []
        for (a, b) in (
            (complex(x0, y0), complex(x1, y0)),
            (complex(x1, y0), complex(x1, y1)),
            (complex(x1, y1), complex(x0, y1)),
            (complex(x0, y1), complex(x0, y0)),
        ):
            m = max(3, int(math.ceil(abs(b - a) / spacing)))
            pts.extend(a + (b - a) * i / m for i in range(m))
        pts.append(pts[0])
        self.pts = np.array(pts, dtype=complex)
        self.vals = None
        self.rounds = 0
        self.dilations = 0

    def needed(self):
        """Points still lacking values (midpoints of too-large phase steps)."""
        if self.vals is None:
            return self.pts
        d = _wrap(np.diff(self.vals.imag))
        bad = np.nonzero(np.abs(d) >= np.pi / 2.0)[0]
        if bad.size == 0 or self.rounds > 26 or self.pts.size > 120000:
            return np.empty(0, dtype=complex)
        return 0.5 * (self.pts[bad] + self.pts[bad + 1])

    def absorb(self, new_pts, new_vals):
        if self.vals is None:
            self.vals = new_vals
            self.rounds += 1
            return
        d = _wrap(np.diff(self.vals.imag))
        bad = np.nonzero(np.abs(d) >= np.pi / 2.0)[0]
        pts = np.empty(self.pts.size + bad.size, dtype=complex)
        vals = np.empty(self.pts.size + bad.size, dtype=complex)
        pos = bad + 1 + np.arange(bad.size)
        mask = np.ones(pts.size, dtype=bool)
        mask[pos] = False
        pts[mask], vals[mask] = self.pts, self.vals
        pts[pos], vals[pos] = new_pts, new_vals
        self.pts, self.vals = pts, vals
        self.rounds += 1

    def result(self):
        """(winding, ok, suspicious): final tallies once refined.

        The dip threshold scales with box size: |log f| legitimately
        varies by O(size · gradient) across large boxes, while a zero
        grazing the boundary digs far deeper on small ones.
        """
        x0, x1, y0, y1 = self.box
        size = max(x1 - x0, y1 - y0)
        d = _wrap(np.diff(self.vals.imag))
        unresolved = np.any(np.abs(d) >= np.pi / 2.0)
        thr = -34.0 - 8.0 * size
        deep_dip = float(np.min(self.vals.real) - np.max(self.vals.real)) < thr
        total = float(np.sum(d)) / (2.0 * np.pi)
        w = int(round(total))
        ok = (not unresolved) and abs(total - w) < 0.2
        return w, ok, deep_dip or not ok


def _winding_batch(logf, boxes, spacing=0.35, dilate=1.3e-3, max_dilations=3):
    """Windings for many boxes with all evaluations batched.

    Returns dict box -> winding or None.  Suspicious boundaries
    (unresolved phase steps or a deep |f| dip, i.e. a grazing zero) are
    dilated and redone; a boundary that stays suspicious after
    max_dilations maps to None.
    """
    work = {box: _Boundary(box, spacing) for box in boxes}
    out = {}
    while work:
        chunks = []
        owners = []
        for box, b in work.items():
            need = b.needed()
            if need.size:
                chunks.append(need)
                owners.append((box, need.size))
        if chunks:
            allpts = np.concatenate(chunks)
            allvals = np.asarray(logf(allpts))
            ofs = 0
            for (box, m), chunk in zip(owners, chunks):
                work[box].absorb(chunk, allvals[ofs : ofs + m])
                ofs += m
            continue
        # every boundary refined; harvest or dilate
        refreshed = {}
        for box, b in work.items():
            w, ok, suspicious = b.result()
            if ok and not suspicious:
                out[box] = w
            elif b.dilations < max_dilations:
                x0, x1, y0, y1 = b.box
                g = dilate * (b.dilations + 1) * max(x1 - x0, y1 - y0, 1.0)
                nb = _Boundary((x0 - g, x1 + g, y0 - g, y1 + g), spacing)
                nb.dilations = b.dilations + 1
                refreshed[box] = nb
            else:
                out[box] = None
        work = refreshed
    return out


def winding_count(logf, box, spacing: float = 0.35) -> int:
    """Zeros inside one axis-aligned box, counted with order."""
    w = _winding_batch(logf, [tuple(map(float, box))], spacing)[tuple(map(float, box))]
    if w is None:
        raise BoundaryZeroSuspected(f"boundary zero suspected at box {box}")
    return w


# ---------------------------------------------------------------------------
# lockstep Newton refinement
# ---------------------------------------------------------------------------

def _refine_zeros(logf_pair, seeds, orders, tol, max_newton=16, max_secant=40):
    """Damped Newton approach plus secant polish, for many zeros at once.

    The Newton stage steps z -= m / (log f)' with the multiplicity m from
    the winding; finite differencing of log f breaks down once the zero
    is closer than the step h, so simple zeros finish with a secant
    iteration on the rescaled value, which needs no derivative.  The
    reported residual is the magnitude of the final iteration step, a
    superlinear estimate of the distance to the true zero in s-units; it
    stays meaningful for zeros forced by a vanishing prefactor, where a
    value-over-term-size measure would be O(1).
    """
    z = np.array(seeds, dtype=complex)
    m = np.array(orders, dtype=float)
    active = np.ones(z.shape, dtype=bool)
    resid = np.full(z.shape, np.inf)
    h = np.full(z.shape, 1e-6)
    # track the best iterate by |f|; the finite-difference derivative of
    # an even-order zero degenerates when the zero sits between the two
    # stencil points, and the iteration can bounce away afterwards
    best_z = z.copy()
    best_f = np.full(z.shape, np.inf)
    best_step = np.full(z.shape, np.inf)
    for _ in range(max_newton):
        if not np.any(active):
            break
        idx = np.nonzero(active)[0]
        pts = np.concatenate([z[idx] + h[idx], z[idx] - h[idx], z[idx]])
        lw, _ = logf_pair(pts)
        up, dn, mid = lw[: idx.size], lw[idx.size : 2 * idx.size], lw[2 * idx.size :]
        dlog = (up.real - dn.real + 1j * _wrap(up.imag - dn.imag)) / (2.0 * h[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dlog != 0, -m[idx] / dlog, 0.0)
        cap = np.abs(step) > 0.5
        step = np.where(cap, step * (0.5 / np.maximum(np.abs(step), 1e-300)), step)
        better = np.asarray(mid).real < best_f[idx]
        sel = idx[better]
        best_f[sel] = np.asarray(mid).real[better]
        best_z[sel] = z[sel]
        best_step[sel] = np.abs(step)[better]
        z[idx] += step
        resid[idx] = np.abs(step)
        conv = np.abs(step) < 1e-12 * (1.0 + np.abs(z[idx]))
        active[idx[conv]] = False
        h[idx] = np.clip(0.3 * np.abs(step), 2e-9, 1e-5)
    # multiplicity > 1: settle on the best visited point
    multi = m > 1.0
    if np.any(multi):
        take = multi & (best_f < np.inf)
        z[take] = best_z[take]
        resid[take] = np.minimum(resid[take], best_step[take])
        active[take & (resid < 1e-5)] = False

    # secant polish for simple zeros; multiplicity-m zeros keep the Newton
    # result (the oscillation floor of the damped FD stage is ~h, already
    # well inside any practical tolerance for collided zeros)
    simple = m == 1.0
    if np.any(simple):
        idx = np.nonzero(simple)[0]
        z0 = z[idx] + np.maximum(h[idx], 1e-9)
        z1 = z[idx].copy()
        lw_all, _ = logf_pair(np.concatenate([z0, z1]))
        l0, l1 = lw_all[: idx.size], lw_all[idx.size :]
        ref = np.maximum(l0.real, l1.real)
        w0 = np.exp(l0 - ref)
        w1 = np.exp(l1 - ref)
        live = np.ones(idx.size, dtype=bool)
        for _ in range(max_secant):
            if not np.any(live):
                break
            jj = np.nonzero(live)[0]
            dw = w1[jj] - w0[jj]
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(dw != 0, -w1[jj] * (z1[jj] - z0[jj]) / dw, 0.0)
            step = np.where(np.abs(step) > 0.2, 0.0, step)
            z2 = z1[jj] + step
            lw2, _ = logf_pair(z2)
            ref2 = np.maximum(l1[jj].real, np.asarray(lw2).real)
            with np.errstate(invalid="ignore", over="ignore", under="ignore"):
                # exact zeros give -inf logs; the resulting 0/nan weights
                # terminate those secants on the next `done` check
                w0[jj] = w1[jj] * np.exp(l1[jj].real - ref2)
                w1[jj] = np.exp(np.asarray(lw2) - ref2)
            z0[jj], z1[jj] = z1[jj], z2
            l1[jj] = np.asarray(lw2)
            resid[idx[jj]] = np.abs(step)
            done = (np.abs(step) < 5e-15 * (1.0 + np.abs(z2))) | (step == 0)
            live[jj[done]] = False
        z[idx] = z1
        active[idx] = ~(resid[idx] <= tol)

    return z, resid, (~active) & (resid <= tol)


# ---------------------------------------------------------------------------
# breadth-first subdivision scan
# ---------------------------------------------------------------------------

def _split_coord(lo: float, hi: float, jitter: int) -> float:
    mid = 0.5 * (lo + hi) + 0.0137 * (hi - lo) * jitter
    cand = snap(mid)
    if jitter == 0 and lo + 0.25 * (hi - lo) <= cand <= hi - 0.25 * (hi - lo):
        return cand
    return mid


def _children(box, jitter: int = 0):
    x0, x1, y0, y1 = box
    if x1 - x0 >= y1 - y0:
        c = _split_coord(x0, x1, jitter)
        return [(x0, c, y0, y1), (c, x1, y0, y1)]
    c = _split_coord(y0, y1, jitter)
    return [(x0, x1, y0, c), (x0, x1, c, y1)]


def _scan_region(logf, logf_pair, tiles, tol, refine_box=0.8, min_box=1e-4):
    """All zeros with orders inside a union of rectangles (batched BFS).

    Subdivision conserves winding: the children of a split box must carry
    the parent's total.  A mismatch (a zero caught on the split line, or
    double-captured through boundary dilation) re-splits the parent along
    a jittered line.  All boundary evaluations of a generation run as one
    vectorized call.
    """
    found = []
    # groups of child boxes whose windings must sum to the parent's
    groups = [
        {"parent": None, "expected": None, "jitter": 0, "children": [tuple(map(float, t))]}
        for t in tiles
    ]
    while groups:
        all_boxes = [b for g in groups for b in g["children"]]
        windings = _winding_batch(logf, all_boxes)
        next_groups = []
        to_refine = []

        def dispatch(box, w):
            x0, x1, y0, y1 = box
            size = max(x1 - x0, y1 - y0)
            if w == 0:
                return
            if w < 0:
                raise RuntimeError(f"negative winding {w} for entire function at {box}")
            if (w == 1 and size <= refine_box) or size <= min_box:
                to_refine.append((box, w))
            else:
                next_groups.append(
                    {"parent": box, "expected": w, "jitter": 0,
                     "children": _children(box)}
                )

        for g in groups:
            ws = [windings[b] for b in g["children"]]
            consistent = all(w is not None for w in ws) and (
                g["expected"] is None or sum(ws) == g["expected"]
            )
            if not consistent and g["parent"] is not None and g["jitter"] < 6:
                jit = g["jitter"] + 1
                next_groups.append(
                    {"parent": g["parent"], "expected": g["expected"], "jitter": jit,
                     "children": _children(g["parent"], jit)}
                )
                continue
            if not consistent:
                # root tile whose boundary cannot be resolved: report the
                # unresolved cell honestly rather than guessing
                for b, w in zip(g["children"], ws):
                    if w is None:
                        raise BoundaryZeroSuspected(f"unresolved boundary at {b}")
                    dispatch(b, w)
                continue
            for b, w in zip(g["children"], ws):
                dispatch(b, w)

        if to_refine:
            seeds = [complex(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3])) for b, _ in to_refine]
            orders = [w for _, w in to_refine]
            zs, resids, ok = _refine_zeros(logf_pair, seeds, orders, tol)
            for (box, w), z, rs, okk in zip(to_refine, zs, resids, ok):
                x0, x1, y0, y1 = box
                size = max(x1 - x0, y1 - y0)
                near = (
                    x0 - size <= z.real <= x1 + size
                    and y0 - size <= z.imag <= y1 + size
                )
                if okk and near:
                    found.append((complex(z), int(w), float(rs), True))
                elif size <= min_box:
                    # unrefined: report the containing box's center, with
                    # its half-diagonal as the location uncertainty
                    half_diag = 0.5 * math.hypot(x1 - x0, y1 - y0)
                    found.append(
                        (complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)), int(w), half_diag, False)
                    )
                else:
                    next_groups.append(
                        {"parent": box, "expected": w, "jitter": 0,
                         "children": _children(box)}
                    )
        groups = next_groups

    # merge coincident findings: a zero of even order sitting exactly on a
    # split line passes phase tracking as two half-winding simple zeros in
    # the adjacent boxes; their refinements collapse to one point
    found.sort(key=lambda t: (t[0].real, t[0].imag))
    merged = []
    for z, w, rs, rf in found:
        if merged and abs(merged[-1][0] - z) <= 1e-7:
            pz, pw, prs, prf = merged[-1]
            merged[-1] = (pz, pw + w, min(prs, rs), prf and rf)
        else:
            merged.append((z, w, rs, rf))
    return merged


def _mode_logf(pot: Potential, l: int):
    """(winding fn, refine fn) for the mode's zero-carrying function."""
    if isinstance(pot.profile, StepProfile):
        def pair(s):
            return log_w_step(pot, l, np.asarray(s, dtype=complex))

        def logf(s):
            return pair(s)[0]

        return logf, pair
    n = pot.n

    def pair_ode(s):
        s = np.asarray(s, dtype=complex)
        vals = np.array(
            [log_f_ratio_ode(pot, l, complex(x)) for x in s.ravel()]
        ).reshape(s.shape)
        vals = vals + log_f0_normalized(n, l, s)
        return vals, np.zeros(s.shape, dtype=float)

    def logf_ode(s):
        return pair_ode(s)[0]

    return logf_ode, pair_ode


def _root_tiles(region, tile=3.0):
    """Deterministic cover of a rectangle by tiles with snapped inner edges."""
    x0, x1, y0, y1 = region
    xs = [x0]
    v = snap(x0 + tile)
    while v < x1 - 0.3:
        xs.append(v)
        v = snap(v + tile)
    xs.append(x1)
    ys = [y0]
    v = snap(y0 + tile)
    while v < y1 - 0.3:
        ys.append(v)
        v = snap(v + tile)
    ys.append(y1)
    return [
        (xs[i], xs[i + 1], ys[j], ys[j + 1])
        for i in range(len(xs) - 1)
        for j in range(len(ys) - 1)
    ]


MIRROR_STRIP = snap(0.73)


def mode_resonances(
    pot: Potential,
    l: int,
    t_max: float,
    tol: float = 1e-9,
    include_eigen_side: bool = False,
):
    """All zeros of the mode-l coefficient in {|s-n/2| ≤ t_max, Re s < n/2}.

    Returns (resonances, eigen_side) lists of Resonance.  For real
    potentials only Im s ≥ -0.73 is scanned; zeros above the strip are
    mirrored by conjugation symmetry.
    """
    n = pot.n
    logf, pair = _mode_logf(pot, l)
    half = n / 2.0
    pad = 0.8
    left = snap(half - t_max - pad)
    top = snap(t_max + pad)
    mirror = pot.is_real
    bottom = -MIRROR_STRIP if mirror else snap(-t_max - pad)

    found = _scan_region(logf, pair, _root_tiles((left, half, bottom, top)), tol)

    mu = multiplicity(n, l)

    def is_lattice_artifact(zz: complex) -> bool:
        if n % 2 != 0:
            return False
        m = round(zz.real)
        return (
            m <= -l + 1e-9
            and abs(zz.real - m) <= 1e-7
            and abs(zz.imag) <= 1e-7
        )

    def collect(items):
        out = []
        for z, order, resid, refined in items:
            mirrored = [(z, resid, refined)]
            if mirror and z.imag > MIRROR_STRIP + 1e-9:
                mirrored.append((z.conjugate(), resid, refined))
            for zz, rs, rf in mirrored:
                out.append(
                    Resonance(
                        zeta=complex(zz),
                        l=l,
                        zero_order=int(order),
                        total_multiplicity=int(order) * mu,
                        residual=float(rs),
                        refined=bool(rf),
                        lattice_artifact=is_lattice_artifact(complex(zz)),
                    )
                )
        return out

    res = [
        r
        for r in collect(found)
        if abs(r.zeta - half) <= t_max and r.zeta.real < half - 1e-9
    ]
    res = _dedupe(res)
    res.sort(key=lambda r: (r.zeta.imag, r.zeta.real))

    eigen = []
    if include_eigen_side:
        right = snap(half + t_max + pad)
        found_r = _scan_region(
            logf, pair, _root_tiles((half, right, bottom, top)), tol
        )
        eigen = [
            r
            for r in collect(found_r)
            if abs(r.zeta - half) <= t_max and r.zeta.real >= half - 1e-9
        ]
        eigen = _dedupe(eigen)
        eigen.sort(key=lambda r: (r.zeta.imag, r.zeta.real))
    return res, eigen


def _dedupe(items, eps=1e-8):
    out = []
    for r in sorted(items, key=lambda r: (r.zeta.real, r.zeta.imag)):
        if out and abs(out[-1].zeta - r.zeta) <= eps and out[-1].l == r.l:
            continue
        out.append(r)
    return out


def _background_resonances(n: int, t_max: float):
    """Exact V = 0 resonance set: empty for n even, Γ-pole lattice for odd."""
    out = []
    if n % 2 == 0:
        return out
    for l in range(0, int(t_max - n / 2.0) + 2):
        m = 0
        while abs(-l - m - n / 2.0) <= t_max:
            out.append(
                Resonance(
                    zeta=complex(-l - m),
                    l=l,
                    zero_order=1,
                    total_multiplicity=multiplicity(n, l),
                    residual=0.0,
                )
            )
            m += 1
    return out


def all_resonances(
    pot: Potential,
    t_max: float,
    tol: float = 1e-9,
    l_max: int | None = None,
    margin: int = 5,
    t_ceiling: float = 60.0,
    progress=None,
) -> ResonanceSet:
    """Resonance set over all modes with a completeness certificate.

    The mode cutoff is l_max = ceil(t_max / min_θ ϱ(θ)) + margin; the
    certificate records that the top `margin` modes produced no zeros in
    the disk.  V = 0 is exact (empty for n even).
    """
    n = pot.n
    if t_max > t_ceiling:
        raise ValueError(f"t_max exceeds ceiling {t_ceiling}")
    if pot.is_zero:
        res = _background_resonances(n, t_max)
        res.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
        return ResonanceSet(
            potential=pot.to_json_dict(),
            n=n,
            t_max=t_max,
            resonances=tuple(res),
            l_max_used=int(t_max) + 1,
            certificate={"exact": True, "guard_modes": []},
        )

    if l_max is None:
        thetas = np.linspace(0.0, np.pi / 2.0, 31)
        rho_min = min(rho_curve(float(t), pot.r0) for t in thetas)
        l_max = int(math.ceil(t_max / rho_min)) + margin

    resonances = []
    eigen = []
    guard_report = []
    l = 0
    escalations = 0
    while l <= l_max:
        got, eig = mode_resonances(pot, l, t_max, tol, include_eigen_side=True)
        if progress is not None:
            progress(l, l_max, len(got))
        if l > l_max - margin:
            guard_report.append({"l": l, "zeros": len(got)})
            if got:
                escalations += 1
                if escalations > 3:
                    raise CertificateFailure(
                        f"guard mode l={l} produced zeros after 3 escalations"
                    )
                l_max += margin
        resonances.extend(got)
        eigen.extend(eig)
        l += 1
    resonances.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
    eigen.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
    return ResonanceSet(
        potential=pot.to_json_dict(),
        n=n,
        t_max=t_max,
        resonances=tuple(resonances),
        l_max_used=l_max,
        certificate={
            "exact": False,
            "guard_modes": guard_report,
            "margin": margin,
        },
        eigenvalue_side=tuple(eigen),
    )
