"""Strict readers for the solver's CSV artifacts.

Each reader validates the header against the producing CLI's schema and
fails with an explicit column diff; empty data files are an error, never
an empty plot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

RESONANCE_COLUMNS = [
    "n", "l", "k", "re_s", "im_s", "zero_order", "mu", "total_multiplicity", "residual",
]
COUNTING_COLUMNS = ["t", "N", "N0", "N_tilde", "weyl_pred"]
INDICATOR_COLUMNS = ["theta", "h", "rho"]


class SchemaError(ValueError):
    """Input columns do not match the producing CLI's schema."""


class EmptyInputError(ValueError):
    """The input file carries a header but no data rows."""


def _read(path, expected):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            missing = [c for c in expected if c not in (header or [])]
            extra = [c for c in (header or []) if c not in expected]
            raise SchemaError(
                f"{path}: header mismatch (missing {missing or 'none'}, "
                f"unexpected {extra or 'none'})"
            )
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return rows


@dataclass(frozen=True)
class ResonanceTable:
    n: int
    l: np.ndarray
    re_s: np.ndarray
    im_s: np.ndarray
    zero_order: np.ndarray
    mu: np.ndarray
    total_multiplicity: np.ndarray
    rows: int


def read_resonances(path) -> ResonanceTable:
    rows = _read(path, RESONANCE_COLUMNS)
    arr = np.array([[float(x) for x in row] for row in rows])
    return ResonanceTable(
        n=int(arr[0, 0]),
        l=arr[:, 1].astype(int),
        re_s=arr[:, 3],
        im_s=arr[:, 4],
        zero_order=arr[:, 5].astype(int),
        mu=arr[:, 6].astype(int),
        total_multiplicity=arr[:, 7].astype(int),
        rows=len(rows),
    )


@dataclass(frozen=True)
class CountingTable:
    t: np.ndarray
    n_count: np.ndarray
    n0: np.ndarray
    n_tilde: np.ndarray
    weyl_pred: np.ndarray
    rows: int


def read_counting(path) -> CountingTable:
    rows = _read(path, COUNTING_COLUMNS)
    arr = np.array([[float(x) for x in row] for row in rows])
    return CountingTable(
        t=arr[:, 0],
        n_count=arr[:, 1],
        n0=arr[:, 2],
        n_tilde=arr[:, 3],
        weyl_pred=arr[:, 4],
        rows=len(rows),
    )


@dataclass(frozen=True)
class IndicatorTable:
    theta: np.ndarray
    h: np.ndarray
    rho: np.ndarray
    rows: int


def read_indicator(path) -> IndicatorTable:
    rows = _read(path, INDICATOR_COLUMNS)
    arr = np.array([[float(x) for x in row] for row in rows])
    return IndicatorTable(theta=arr[:, 0], h=arr[:, 1], rho=arr[:, 2], rows=len(rows))
