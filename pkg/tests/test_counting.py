"""Counting functions, sectors, Weyl fits, contour identity."""

import math

import numpy as np
import pytest

from hyperres.counting import (
    background_set,
    contour_check,
    counting_function,
    counting_table,
    sector_count,
    sector_prediction,
    weyl_report,
)
from hyperres.phase import weyl_constant
from hyperres.potentials import step_potential
from hyperres.zeros import Resonance, ResonanceSet, all_resonances


def make_set(n, t_max, zetas_mults, pot=None):
    pot = pot or step_potential(n, 1.0, 1.0)
    res = tuple(
        Resonance(zeta=z, l=0, zero_order=1, total_multiplicity=m, residual=0.0)
        for z, m in zetas_mults
    )
    return ResonanceSet(
        potential=pot.to_json_dict(),
        n=n,
        t_max=t_max,
        resonances=res,
        l_max_used=0,
        certificate={},
    )


class TestBackground:
    def test_n1_formula(self):
        got = background_set(1, 5.0)
        assert got == [(0, 1), (-1, 3), (-2, 5), (-3, 7), (-4, 9)]

    def test_n2_empty(self):
        assert background_set(2, 40.0) == []

    def test_n3_k2(self):
        vals = dict(background_set(3, 6.0))
        assert vals[-2] == 5 * 3 * 4 // 6  # m_0(-2) = 10

    def test_n3_partial_sums_track_weyl(self):
        # N_0(t) ~ (2/4!) t^4 for n = 3
        total = sum(m for _, m in background_set(3, 30.0))
        assert abs(total / ((2 / 24) * 30.0 ** 4) - 1.0) < 0.2


class TestCountingFunction:
    def test_empty(self):
        rset = make_set(1, 10.0, [])
        assert counting_function(rset, 5.0) == (0, 0.0)

    def test_background_trend_n1(self):
        zetas = [(complex(k), m) for k, m in background_set(1, 30.0)]
        rset = make_set(1, 30.0, zetas)
        n_val, _ = counting_function(rset, 30.0)
        assert abs(n_val / ((2 / 2) * 30.0 ** 2) - 1.0) < 0.1

    def test_n_tilde_against_quadrature_oracle(self):
        zetas = [(0.5 - 3.0 + 4.0j, 2), (0.5 - 8.0 - 1.0j, 3), (0.5 + 0.0j, 1)]
        rset = make_set(1, 20.0, zetas)
        a = 15.0
        _, n_tilde = counting_function(rset, a)
        ts = np.linspace(1e-6, a, 400000)
        n_of_t = np.array([counting_function(rset, float(t))[0] for t in np.linspace(1e-6, a, 2000)])
        # exact piecewise-log integration vs brute trapezoid of (N(t)-N(0))/t
        t_coarse = np.linspace(1e-6, a, 2000)
        n0 = counting_function(rset, 1e-9)[0]
        integrand = (n_of_t - n0) / t_coarse
        brute = 2.0 * np.trapezoid(integrand, t_coarse)
        assert abs(n_tilde - brute) < 0.05 * max(1.0, abs(n_tilde))

    def test_beyond_disk_raises(self):
        rset = make_set(1, 10.0, [])
        with pytest.raises(ValueError):
            counting_function(rset, 11.0)

    def test_table_monotone(self):
        zetas = [(complex(k), m) for k, m in background_set(1, 12.0)]
        rset = make_set(1, 12.0, zetas)
        rows = counting_table(rset, num=40)
        ns = [r[1] for r in rows]
        assert all(b >= a for a, b in zip(ns, ns[1:]))


class TestSectors:
    def setup_method(self):
        self.zetas = [
            (1.0 - 2.0 + 5.0j, 1),
            (1.0 - 2.0 - 5.0j, 1),
            (1.0 - 7.0 + 0.0j, 4),
            (1.0 - 1.0 + 1.0j, 2),
        ]
        self.rset = make_set(2, 12.0, self.zetas)

    def test_full_sector_is_total(self):
        n_total, _ = counting_function(self.rset, 12.0)
        got, _ = sector_count(self.rset, 12.0, np.pi / 2, 3 * np.pi / 2)
        assert got == n_total

    def test_conjugation_symmetric_counts(self):
        a, _ = sector_count(self.rset, 12.0, np.pi / 2, np.pi)
        b, _ = sector_count(self.rset, 12.0, np.pi, 3 * np.pi / 2)
        # upper pair (1) + axis point (4, tie goes left) + interior (2)
        assert a == 1 + 4 + 2
        assert b == 1
        assert a + b == counting_function(self.rset, 12.0)[0]

    def test_disjoint_additivity(self):
        t1, t2, t3 = np.pi / 2, 2.2, 3 * np.pi / 2
        whole, _ = sector_count(self.rset, 12.0, t1, t3)
        a, _ = sector_count(self.rset, 12.0, t1, t2)
        b, _ = sector_count(self.rset, 12.0, t2, t3)
        assert whole == a + b

    def test_prediction_full_sector_reduces_to_weyl(self):
        n, r0, t = 2, 1.0, 30.0
        pred = sector_prediction(n, r0, np.pi / 2, 3 * np.pi / 2, t)
        _, a_n = weyl_constant(n, r0)
        assert abs(pred - a_n * t ** (n + 1)) < 2e-4 * a_n * t ** (n + 1)

    def test_prediction_mirror_symmetry(self):
        n, r0, t, d = 2, 1.0, 25.0, 0.35
        left = sector_prediction(n, r0, np.pi / 2 + d, np.pi - d, t)
        right = sector_prediction(n, r0, np.pi + d, 3 * np.pi / 2 - d, t)
        assert abs(left - right) < 1e-6 * max(abs(left), 1.0)

    def test_prediction_rejects_pi(self):
        with pytest.raises(ValueError):
            sector_prediction(2, 1.0, np.pi / 2, np.pi, 10.0)


class TestContour:
    def test_v0_n1_exact(self):
        pot0 = step_potential(1, 0.0, 1.0)
        rset = all_resonances(pot0, 12.0)
        lhs, rhs = contour_check(pot0, 10.0, rset)
        # τ ≡ 1: rhs = A_1^(0) a², lhs = Ñ_0(a); both ~ a² with O(a) gap
        a = 10.23
        assert abs(rhs - a ** 2) < 1e-9
        assert abs(lhs - rhs) / a ** 2 < 0.15


class TestWeylReport:
    def test_v0_n1_fit(self):
        pot0 = step_potential(1, 0.0, 1.0)
        rset = all_resonances(pot0, 35.0)
        rep = weyl_report(rset, 1, 1.0)
        # fit against the model constant A_1^(0) = 1: Ĉ → 1 like O(1/t)
        assert abs(rep.fitted - 1.0) < 0.08

    def test_requires_window(self):
        rset = make_set(1, 10.0, [])
        with pytest.raises(ValueError):
            weyl_report(rset, 1, 1.0)


class TestFitEquivalence:
    def test_n_and_n_tilde_fits_agree(self):
        # fitted constants from N(t)/t² and Ñ(a)/((n+1)·∫-normalized form)
        # agree within 5% (n = 1 background set, exact data)
        pot0 = step_potential(1, 0.0, 1.0)
        rset = all_resonances(pot0, 35.0)
        ts = np.linspace(17.5, 35.0, 60)
        n_vals = np.array([counting_function(rset, float(t))[0] for t in ts])
        nt_vals = np.array([counting_function(rset, float(t))[1] for t in ts])
        basis = ts ** 2
        c_n = float(np.sum(n_vals * basis) / np.sum(basis * basis))
        c_nt = float(np.sum(nt_vals * basis) / np.sum(basis * basis))
        assert abs(c_n / c_nt - 1.0) < 0.05


class TestSupportMonotonicity:
    def test_fitted_constant_grows_with_r0(self):
        # larger support, more resonances: Ĉ(r0=2) > Ĉ(r0=1)
        fits = {}
        for r0 in (1.0, 2.0):
            pot = step_potential(2, 1.0, r0)
            rset = all_resonances(pot, 10.0, tol=1e-8)
            t_grid = np.linspace(5.0, 10.0, 40)
            n_vals = np.array([counting_function(rset, float(t))[0] for t in t_grid])
            basis = t_grid ** 3
            fits[r0] = float(np.sum(n_vals * basis) / np.sum(basis * basis))
        assert fits[2.0] > fits[1.0]
