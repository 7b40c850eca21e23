"""Radial potentials on H^{n+1} and spherical-harmonic mode bookkeeping.

A potential is supported in the ball of radius r0 and is one of:
  step(c)                V = c · χ_{B(r0)}, c complex
  power(kappa, beta)     V(r) = κ (r0 - r)^β on [0, r0], β ≥ 0
  sampled(r, v, sigma)   tabulated complex profile with declared vanishing
                         order σ = β+1 at the support edge

σ = β+1 is the exponent that enters the Laplace-method scalings of the
matrix-element asymptotics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepProfile:
    c: complex

    def value(self, r):
        return np.where(np.asarray(r, dtype=float) <= 0.0, self.c, self.c) + 0j

    @property
    def sigma(self) -> float:
        return 1.0


@dataclass(frozen=True)
class PowerProfile:
    kappa: complex
    beta: float

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")

    @property
    def sigma(self) -> float:
        return self.beta + 1.0


@dataclass(frozen=True)
class SampledProfile:
    r_grid: tuple
    v_grid: tuple
    declared_sigma: float

    @property
    def sigma(self) -> float:
        return self.declared_sigma


@dataclass(frozen=True)
class Potential:
    """Radial potential on H^{n+1} with support in the ball of radius r0."""

    n: int
    r0: float
    profile: StepProfile | PowerProfile | SampledProfile

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.r0 <= 0:
            raise ValueError("r0 must be > 0")

    @property
    def sigma(self) -> float:
        return self.profile.sigma

    @property
    def is_zero(self) -> bool:
        return isinstance(self.profile, StepProfile) and self.profile.c == 0

    @property
    def is_real(self) -> bool:
        if isinstance(self.profile, StepProfile):
            return self.profile.c.imag == 0.0
        if isinstance(self.profile, PowerProfile):
            return self.profile.kappa.imag == 0.0
        return all(complex(v).imag == 0.0 for v in self.profile.v_grid)

    def value(self, r):
        """V(r) for r inside [0, r0]; zero outside (vectorized)."""
        r = np.asarray(r, dtype=float)
        inside = r <= self.r0
        if isinstance(self.profile, StepProfile):
            out = np.where(inside, self.profile.c, 0.0 + 0j)
        elif isinstance(self.profile, PowerProfile):
            out = np.where(
                inside, self.profile.kappa * (self.r0 - r + 0j) ** self.profile.beta, 0.0 + 0j
            )
        else:
            rg = np.asarray(self.profile.r_grid, dtype=float)
            vg = np.asarray(self.profile.v_grid, dtype=complex)
            re = np.interp(r, rg, vg.real, left=vg.real[0], right=0.0)
            im = np.interp(r, rg, vg.imag, left=vg.imag[0], right=0.0)
            out = np.where(inside, re + 1j * im, 0.0 + 0j)
        if out.ndim == 0:
            return complex(out)
        return out

    # -- JSON schema used by the CLI -------------------------------------
    def to_json_dict(self) -> dict:
        if isinstance(self.profile, StepProfile):
            c = self.profile.c
            return {"type": "step", "c": [c.real, c.imag], "r0": self.r0}
        if isinstance(self.profile, PowerProfile):
            kp = self.profile.kappa
            return {
                "type": "power",
                "kappa": [kp.real, kp.imag],
                "beta": self.profile.beta,
                "r0": self.r0,
            }
        return {
            "type": "sampled",
            "r": list(self.profile.r_grid),
            "v": [[complex(v).real, complex(v).imag] for v in self.profile.v_grid],
            "sigma": self.profile.declared_sigma,
            "r0": self.r0,
        }

    @staticmethod
    def from_json_dict(n: int, d: dict) -> "Potential":
        kind = d.get("type")
        r0 = float(d["r0"])
        if kind == "step":
            c = d["c"]
            c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            return Potential(n=n, r0=r0, profile=StepProfile(c=c))
        if kind == "power":
            kp = d["kappa"]
            kp = complex(kp[0], kp[1]) if isinstance(kp, (list, tuple)) else complex(kp)
            return Potential(n=n, r0=r0, profile=PowerProfile(kappa=kp, beta=float(d["beta"])))
        if kind == "sampled":
            v = [complex(x[0], x[1]) for x in d["v"]]
            return Potential(
                n=n,
                r0=r0,
                profile=SampledProfile(
                    r_grid=tuple(float(x) for x in d["r"]),
                    v_grid=tuple(v),
                    declared_sigma=float(d["sigma"]),
                ),
            )
        raise ValueError(f"unknown potential type {kind!r}")


def step_potential(n: int, c: complex, r0: float) -> Potential:
    return Potential(n=n, r0=r0, profile=StepProfile(c=complex(c)))


def multiplicity(n: int, l: int) -> int:
    """Multiplicity μ_n(l) of spherical harmonics of weight l on S^n.

    μ_n(l) = (2l+n-1)/(n-1) · C(l+n-2, n-2) for n ≥ 2; on the circle
    (n = 1) the Fourier modes give 1 for l = 0 and 2 for l ≥ 1.
    """
    if n < 1 or l < 0:
        raise ValueError("need n >= 1, l >= 0")
    if n == 1:
        return 1 if l == 0 else 2
    return (2 * l + n - 1) * math.comb(l + n - 2, n - 2) // (n - 1)


@dataclass(frozen=True)
class ModeIndex:
    """Spherical-harmonic mode: weight l, order k = l+(n-1)/2, multiplicity."""

    l: int
    k: float
    mu: int

    @staticmethod
    def make(n: int, l: int) -> "ModeIndex":
        return ModeIndex(l=l, k=l + (n - 1) / 2.0, mu=multiplicity(n, l))
