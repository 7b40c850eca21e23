"""Figure renderers.

Each renderer takes parsed tables, draws one figure, asserts the
round-trip (points drawn == rows read), and writes SVG or PNG by output
extension.  Deterministic for fixed inputs: no randomness, fixed layout.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import CountingTable, IndicatorTable, ResonanceTable


def _save(fig, out_path):
    fig.savefig(out_path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def render_resonances(table: ResonanceTable, out_path, title=None):
    """Resonance scatter with per-mode chains and a multiplicity legend."""
    fig, ax = plt.subplots(figsize=(7.5, 6))
    drawn = 0
    for l in sorted(set(table.l)):
        sel = table.l == l
        order = np.argsort(table.im_s[sel])
        xs, ys = table.re_s[sel][order], table.im_s[sel][order]
        chain = np.abs(ys) > 1e-7
        if chain.sum() > 1:
            ax.plot(xs[chain], ys[chain], "-", lw=0.5, color="0.75", zorder=1)
        ax.scatter(xs, ys, s=9, zorder=2, color="C0")
        drawn += int(sel.sum())
    assert drawn == table.rows, f"round-trip: drew {drawn} of {table.rows} rows"
    mu_label = "2l+1" if table.n == 2 else f"mu_{table.n}(l)"
    ax.scatter([], [], s=9, color="C0", label=f"multiplicity {mu_label} per chain")
    ax.axvline(table.n / 2.0, color="k", lw=0.8, ls="--", label=f"Re s = {table.n}/2")
    ax.set_xlabel("Re s")
    ax.set_ylabel("Im s")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(title or f"Resonances, H^{table.n + 1}")
    _save(fig, out_path)
    return drawn


def render_counting(table: CountingTable, out_path, title=None):
    """Counting staircase with the Weyl prediction overlay."""
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.step(table.t, table.n_count, where="post", label="N(t)")
    if np.any(table.n0 > 0):
        ax.step(table.t, table.n0, where="post", lw=0.8, label="N0(t)")
    ax.plot(table.t, table.weyl_pred, "--", color="C3", label="A_n(r0) t^{n+1}")
    assert len(ax.lines[-1].get_xdata()) == table.rows
    ax.set_xlabel("t")
    ax.set_ylabel("count")
    ax.legend(loc="upper left")
    ax.set_title(title or "Resonance counting function")
    _save(fig, out_path)
    return table.rows


def render_indicator(table: IndicatorTable, out_path, title=None):
    """Indicator curve h(θ) over [-π/2, π/2]."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(table.theta, table.h, color="C0")
    assert len(ax.lines[0].get_xdata()) == table.rows
    ax.set_xlabel("theta")
    ax.set_ylabel("h(theta)")
    ax.set_xticks([-np.pi / 2, -np.pi / 4, 0, np.pi / 4, np.pi / 2])
    ax.set_xticklabels([r"$-\pi/2$", r"$-\pi/4$", "0", r"$\pi/4$", r"$\pi/2$"])
    ax.set_title(title or "Indicator function")
    _save(fig, out_path)
    return table.rows


def render_hregion(table: IndicatorTable, out_path, title=None):
    """Sign regions of the growth exponent with the zero curve ϱ(θ).

    Drawn purely from the exported curve: the region enclosed toward the
    origin is where the exponent is negative, outside positive.
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    x = table.rho * np.cos(table.theta)
    y = table.rho * np.sin(table.theta)
    ax.plot(x, y, color="k", lw=1.5, label=r"$\varrho(\theta)$")
    assert len(ax.lines[0].get_xdata()) == table.rows
    ax.fill(
        np.concatenate([[0], x, [0]]),
        np.concatenate([[0], y, [0]]),
        alpha=0.15,
        color="C0",
    )
    rmax = float(table.rho.max()) * 1.6
    ax.text(0.25 * rmax, 0.0, "H < 0", ha="center")
    ax.text(1.25 * float(table.rho.max()), 0.0, "H > 0", ha="center")
    ax.set_xlim(0, rmax)
    ax.set_ylim(-rmax, rmax)
    ax.set_xlabel("Re α")
    ax.set_ylabel("Im α")
    ax.legend(loc="upper right")
    ax.set_title(title or "Growth-exponent sign regions")
    _save(fig, out_path)
    return table.rows


def render_compare(table_a: ResonanceTable, table_b: ResonanceTable, out_path,
                   labels=("potential A", "potential B"), title=None):
    """Side-by-side resonance panels (real vs imaginary coupling)."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharex=True, sharey=True)
    drawn = 0
    for ax, table, label in zip(axes, (table_a, table_b), labels):
        ax.scatter(table.re_s, table.im_s, s=7, color="C0")
        ax.axvline(table.n / 2.0, color="k", lw=0.8, ls="--")
        ax.set_title(label)
        ax.set_xlabel("Re s")
        drawn += table.rows
    axes[0].set_ylabel("Im s")
    assert drawn == table_a.rows + table_b.rows
    if title:
        fig.suptitle(title)
    _save(fig, out_path)
    return drawn
