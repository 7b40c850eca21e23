"""Command-line front door.

Subcommands compute resonance sets, counting tables, indicator tables,
Weyl fits, sector statistics, and the contour cross-check, emitting CSV
artifacts plus a manifest JSON per run.  Outputs are deterministic for a
fixed configuration: floats print with 17 significant digits and all
merges are sorted.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .counting import (
    contour_check,
    counting_table,
    sector_count,
    sector_prediction,
    snap_radius,
    weyl_report,
    write_counting_csv,
)
from .phase import indicator_table, weyl_constant
from .potentials import Potential
from .zeros import Resonance, ResonanceSet, all_resonances, mode_resonances


def parse_potential(n: int, text: str) -> Potential:
    """Inline (`step:c=1,r0=1`), JSON string, or JSON file path."""
    text = text.strip()
    if text.startswith("{"):
        return Potential.from_json_dict(n, json.loads(text))
    if text.startswith("@") or os.path.exists(text):
        path = text[1:] if text.startswith("@") else text
        with open(path) as fh:
            return Potential.from_json_dict(n, json.load(fh))
    if ":" in text:
        kind, _, rest = text.partition(":")
        fields = {}
        for item in rest.split(","):
            key, _, val = item.partition("=")
            fields[key.strip()] = val.strip()
        def cplx(v):
            return complex(v.replace("i", "j"))
        if kind == "step":
            return Potential.from_json_dict(
                n,
                {
                    "type": "step",
                    "c": [cplx(fields["c"]).real, cplx(fields["c"]).imag],
                    "r0": float(fields["r0"]),
                },
            )
        if kind == "power":
            return Potential.from_json_dict(
                n,
                {
                    "type": "power",
                    "kappa": [cplx(fields["kappa"]).real, cplx(fields["kappa"]).imag],
                    "beta": float(fields["beta"]),
                    "r0": float(fields["r0"]),
                },
            )
    raise click.UsageError(f"cannot parse potential spec {text!r}")


def _manifest(out_dir, command, config, extra=None, t0=None):
    blob = json.dumps(config, sort_keys=True, default=str)
    manifest = {
        "command": command,
        "config": config,
        "config_hash": hashlib.sha256(blob.encode()).hexdigest()[:16],
        "version": __version__,
        "wall_time_s": round(time.time() - t0, 3) if t0 else None,
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
    return path


def _load_resonances_csv(path, n, t_max, pot) -> ResonanceSet:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        expect = "n,l,k,re_s,im_s,zero_order,mu,total_multiplicity,residual".split(",")
        if header != expect:
            raise click.UsageError(f"{path}: unexpected columns {header}")
        for line in fh:
            f = line.strip().split(",")
            zeta = complex(float(f[3]), float(f[4]))
            l = int(f[1])
            # the n-even forced lattice zeros are recognizable from their
            # exact locations, so the flag survives the CSV round trip
            artifact = (
                n % 2 == 0
                and round(zeta.real) <= -l + 1e-9
                and abs(zeta.real - round(zeta.real)) <= 1e-7
                and abs(zeta.imag) <= 1e-7
            )
            rows.append(
                Resonance(
                    zeta=zeta,
                    l=l,
                    zero_order=int(f[5]),
                    total_multiplicity=int(f[7]),
                    residual=float(f[8]),
                    lattice_artifact=artifact,
                )
            )
    rows.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
    return ResonanceSet(
        potential=pot.to_json_dict(),
        n=n,
        t_max=t_max,
        resonances=tuple(rows),
        l_max_used=max((r.l for r in rows), default=0),
        certificate={"loaded_from": path},
    )


def _mode_worker(args):
    pot_dict, n, l, t_max, tol = args
    pot = Potential.from_json_dict(n, pot_dict)
    got, eig = mode_resonances(pot, l, t_max, tol, include_eigen_side=True)
    return l, got, eig


def _compute_set(pot, t_max, tol, workers) -> ResonanceSet:
    if workers <= 1 or pot.is_zero:
        return all_resonances(pot, t_max, tol)
    # parallel over modes with a deterministic merge; the certificate is
    # evaluated exactly as in the sequential path
    from .phase import rho_curve

    thetas = np.linspace(0.0, np.pi / 2.0, 31)
    rho_min = min(rho_curve(float(t), pot.r0) for t in thetas)
    margin = 5
    l_max = int(np.ceil(t_max / rho_min)) + margin
    jobs = [(pot.to_json_dict(), pot.n, l, t_max, tol) for l in range(l_max + 1)]
    resonances, eigen, guard = [], [], []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for l, got, eig in sorted(pool.map(_mode_worker, jobs), key=lambda x: x[0]):
            if l > l_max - margin:
                guard.append({"l": l, "zeros": len(got)})
                if got:
                    raise click.ClickException(
                        f"completeness certificate failed at guard mode l={l}; "
                        "rerun with a larger mode margin"
                    )
            resonances.extend(got)
            eigen.extend(eig)
    resonances.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
    eigen.sort(key=lambda r: (r.l, r.zeta.imag, r.zeta.real))
    return ResonanceSet(
        potential=pot.to_json_dict(),
        n=pot.n,
        t_max=t_max,
        resonances=tuple(resonances),
        l_max_used=l_max,
        certificate={"exact": False, "guard_modes": guard, "margin": margin},
        eigenvalue_side=tuple(eigen),
    )


@click.group()
def main():
    """Resonances of Schrödinger operators on hyperbolic space."""


opt_n = click.option("--n", "n", type=int, required=True, help="boundary dimension (space is H^{n+1})")
opt_pot = click.option("--potential", "potential", type=str, required=True)
opt_out = click.option("--out", "out", type=click.Path(), default=".", show_default=True)
opt_tol = click.option("--tol", type=float, default=1e-9, show_default=True)
opt_workers = click.option("--workers", type=int, default=1, show_default=True)


@main.command()
@opt_n
@opt_pot
@click.option("--tmax", type=float, required=True)
@opt_tol
@opt_out
@opt_workers
def resonances(n, potential, tmax, tol, out, workers):
    """Compute the resonance set and write resonances.csv."""
    t0 = time.time()
    pot = parse_potential(n, potential)
    os.makedirs(out, exist_ok=True)
    try:
        rset = _compute_set(pot, tmax, tol, workers)
    except Exception as exc:  # pragma: no cover - defensive
        raise click.ClickException(f"resonance scan failed ({type(exc).__name__}): {exc}")
    rset.to_csv(os.path.join(out, "resonances.csv"))
    if rset.eigenvalue_side:
        with open(os.path.join(out, "eigenvalue_side.csv"), "w") as fh:
            fh.write("n,l,re_s,im_s,zero_order\n")
            for r in rset.eigenvalue_side:
                fh.write(f"{n},{r.l},{r.zeta.real:.17g},{r.zeta.imag:.17g},{r.zero_order}\n")
    _manifest(
        out,
        "resonances",
        {"n": n, "potential": pot.to_json_dict(), "tmax": tmax, "tol": tol, "workers": workers},
        extra={"certificate": rset.certificate, "count": len(rset.resonances)},
        t0=t0,
    )
    click.echo(f"{len(rset.resonances)} resonances -> {out}/resonances.csv")


@main.command()
@opt_n
@opt_pot
@click.option("--tmax", type=float, required=True)
@opt_tol
@opt_out
@opt_workers
@click.option("--resonances-csv", type=click.Path(exists=True), default=None,
              help="reuse a previously computed resonances.csv")
def count(n, potential, tmax, tol, out, workers, resonances_csv):
    """Counting table N, N0, Ñ and the Weyl prediction -> counting.csv."""
    t0 = time.time()
    pot = parse_potential(n, potential)
    os.makedirs(out, exist_ok=True)
    if resonances_csv:
        rset = _load_resonances_csv(resonances_csv, n, tmax, pot)
    else:
        rset = _compute_set(pot, tmax, tol, workers)
    rows = counting_table(rset)
    write_counting_csv(rows, os.path.join(out, "counting.csv"))
    _manifest(
        out,
        "count",
        {"n": n, "potential": pot.to_json_dict(), "tmax": tmax, "tol": tol},
        extra={"certificate": rset.certificate},
        t0=t0,
    )
    click.echo(f"counting table -> {out}/counting.csv")


@main.command()
@opt_n
@click.option("--r0", type=float, required=True)
@click.option("--num-theta", type=int, default=181, show_default=True)
@opt_out
def indicator(n, r0, num_theta, out):
    """Indicator table h_{r0}(θ) and zero curve ϱ(θ) -> indicator.csv."""
    t0 = time.time()
    os.makedirs(out, exist_ok=True)
    table = indicator_table(r0, n, num_theta)
    table.to_csv(os.path.join(out, "indicator.csv"))
    _manifest(out, "indicator", {"n": n, "r0": r0, "num_theta": num_theta}, t0=t0)
    click.echo(f"indicator table -> {out}/indicator.csv")


@main.command()
@opt_n
@opt_pot
@click.option("--tmax", type=float, required=True)
@opt_tol
@opt_out
@opt_workers
@click.option("--resonances-csv", type=click.Path(exists=True), default=None)
def weyl(n, potential, tmax, tol, out, workers, resonances_csv):
    """Weyl-law fit report -> weyl.json."""
    t0 = time.time()
    pot = parse_potential(n, potential)
    os.makedirs(out, exist_ok=True)
    if resonances_csv:
        rset = _load_resonances_csv(resonances_csv, n, tmax, pot)
    else:
        rset = _compute_set(pot, tmax, tol, workers)
    rep = weyl_report(rset, n, pot.r0)
    a0, a_n = weyl_constant(n, pot.r0)
    payload = {
        "fitted": rep.fitted,
        "A_n": rep.predicted,
        "A_0": float(a0),
        "ratio": rep.ratio,
    }
    with open(os.path.join(out, "weyl.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    _manifest(out, "weyl", {"n": n, "potential": pot.to_json_dict(), "tmax": tmax}, t0=t0)
    click.echo(json.dumps(payload))


@main.command()
@opt_n
@opt_pot
@click.option("--tmax", type=float, required=True)
@click.option("--theta1", type=float, required=True)
@click.option("--theta2", type=float, required=True)
@opt_tol
@opt_out
@opt_workers
@click.option("--resonances-csv", type=click.Path(exists=True), default=None)
def sector(n, potential, tmax, theta1, theta2, tol, out, workers, resonances_csv):
    """Measured vs predicted sector count -> sector.json."""
    t0 = time.time()
    pot = parse_potential(n, potential)
    os.makedirs(out, exist_ok=True)
    if resonances_csv:
        rset = _load_resonances_csv(resonances_csv, n, tmax, pot)
    else:
        rset = _compute_set(pot, tmax, tol, workers)
    measured, averaged = sector_count(rset, tmax, theta1, theta2)
    predicted = sector_prediction(n, pot.r0, theta1, theta2, tmax)
    payload = {
        "theta1": theta1,
        "theta2": theta2,
        "measured": measured,
        "averaged": averaged,
        "predicted": predicted,
        "ratio": measured / predicted if predicted else None,
    }
    with open(os.path.join(out, "sector.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    _manifest(out, "sector", {"n": n, "potential": pot.to_json_dict(), "tmax": tmax,
                              "theta1": theta1, "theta2": theta2}, t0=t0)
    click.echo(json.dumps(payload))


@main.command("contour-check")
@opt_n
@opt_pot
@click.option("--a", "radius", type=float, required=True)
@click.option("--tmax", type=float, default=None, help="scan radius (default: a)")
@opt_tol
@opt_out
@opt_workers
@click.option("--resonances-csv", type=click.Path(exists=True), default=None)
def contour_check_cmd(n, potential, radius, tmax, tol, out, workers, resonances_csv):
    """Contour counting identity: Ñ(a) vs the log|τ| integral."""
    t0 = time.time()
    pot = parse_potential(n, potential)
    os.makedirs(out, exist_ok=True)
    tmax = tmax or radius
    if resonances_csv:
        rset = _load_resonances_csv(resonances_csv, n, tmax, pot)
    else:
        rset = _compute_set(pot, tmax, tol, workers)
    lhs, rhs = contour_check(pot, radius, rset)
    a_used = snap_radius(radius)
    payload = {"a": a_used, "a_requested": radius, "lhs": lhs, "rhs": rhs,
               "normalized_gap": abs(lhs - rhs) / a_used ** (n + 1)}
    with open(os.path.join(out, "contour_check.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    _manifest(out, "contour-check", {"n": n, "potential": pot.to_json_dict(), "a": radius}, t0=t0)
    click.echo(json.dumps(payload))


@main.command()
@click.option("--seed", type=int, default=7, show_default=True)
def selftest(seed):
    """Quick invariant suite; exit 0 iff all checks pass."""
    import math

    from .modes import lambda_mode_log, log_f_ratio_step
    from .phase import exponent_H, exponent_H_two_phase, rho_curve
    from .potentials import step_potential
    from .special.legendre import legendre_pair

    rng = np.random.default_rng(seed)
    failures = []

    def check(name, okay):
        click.echo(f"  {'ok ' if okay else 'FAIL'} {name}")
        if not okay:
            failures.append(name)

    d = 0.0
    for _ in range(400):
        alpha = complex(rng.uniform(0.01, 4.0), rng.uniform(-4.0, 4.0))
        r = rng.uniform(0.05, 3.0)
        d = max(d, abs(exponent_H(alpha, r) - exponent_H_two_phase(alpha, r)))
    check(f"H dual-formula agreement ({d:.1e})", d < 1e-10)

    check(
        "rho(pi/2, r0=1) = 1/sinh 1",
        abs(rho_curve(np.pi / 2, 1.0) - 1.0 / math.sinh(1.0)) < 1e-12,
    )

    ok = True
    for _ in range(12):
        k = rng.integers(0, 8) / 2.0
        nu = complex(rng.uniform(-10, 5), rng.uniform(-15, 15))
        r = rng.uniform(0.2, 2.0)
        a = legendre_pair(k, nu, r)
        b = legendre_pair(k, -1 - nu, r)
        ok &= abs(np.exp(a.log_p - b.log_p) - 1) < 1e-10
    check("P degree-reflection invariance", ok)

    pot = step_potential(2, 1.0, 1.0)
    ok = True
    for _ in range(6):
        s = complex(rng.uniform(1.2, 12), rng.uniform(0.4, 12))
        l = int(rng.integers(0, 8))
        ok &= abs(lambda_mode_log(pot, l, s) + lambda_mode_log(pot, l, 2 - s)) < 1e-8
    check("functional equation Λ(s)Λ(n-s) = 1", ok)

    pot0 = step_potential(2, 0.0, 1.0)
    s = complex(0.4, 3.3)
    ratio = complex(np.exp(log_f_ratio_step(pot0, 2, np.array([s]))[0]))
    check("zero potential ratio F/F0 = 1", abs(ratio - 1) < 1e-10)

    if failures:
        raise click.ClickException(f"selftest failed: {failures}")
    click.echo("selftest passed")


if __name__ == "__main__":
    main()
