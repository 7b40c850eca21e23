"""log-Gamma, Airy, and modified Bessel against independent oracles."""

import math

import numpy as np
import pytest

from hyperres.special.airy import airy_ai, log_airy_ai
from hyperres.special.bessel import SingularArgumentError, bessel_modified
from hyperres.special.gamma import GammaPoleError, is_gamma_pole, log_gamma


class TestLogGamma:
    def test_at_one(self):
        assert abs(log_gamma(1.0)) < 1e-14

    def test_at_half(self):
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14

    def test_recurrence(self):
        z = 2.5 + 1.0j
        lhs = np.exp(log_gamma(z + 1))
        rhs = z * np.exp(log_gamma(z))
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    def test_pole_signals(self):
        with pytest.raises(GammaPoleError):
            log_gamma(0.0)
        with pytest.raises(GammaPoleError):
            log_gamma(-3.0)
        assert is_gamma_pole(-7.0)
        assert not is_gamma_pole(-7.3)


def ai_maclaurin(w, terms=60):
    """Independent oracle: Maclaurin series Ai(w) = c1 f(w) - c2 g(w)."""
    c1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
    f = 0j
    g = 0j
    tf, tg = 1.0 + 0j, complex(w)
    for j in range(terms):
        f += tf
        g += tg
        tf *= w ** 3 / ((3 * j + 2) * (3 * j + 3))
        tg *= w ** 3 / ((3 * j + 3) * (3 * j + 4))
    return c1 * f - c2 * g


class TestAiry:
    def test_at_zero(self):
        expected = ai_maclaurin(0.0)
        assert abs(expected - 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))) < 1e-15
        assert abs(airy_ai(0.0) - expected) < 1e-14

    def test_maclaurin_oracle_complex(self):
        for w in (0.3 + 0.7j, -1.2 + 0.4j, 2.0 - 1.0j):
            assert abs(airy_ai(w) - ai_maclaurin(w)) <= 1e-12 * abs(ai_maclaurin(w))

    def test_asymptotic_regime(self):
        w = 10.0
        asym = (
            1.0 / (2.0 * math.sqrt(math.pi)) * w ** -0.25 * math.exp(-2.0 / 3.0 * w ** 1.5)
        )
        assert abs(airy_ai(w) / asym - 1.0) < 1e-2

    def test_bessel_k_oracle(self):
        # Ai(w) = (1/π) sqrt(w/3) K_{1/3}((2/3) w^{3/2})
        w = 4.0 * np.exp(1j * np.pi / 3.0)
        _, kv = bessel_modified(1.0 / 3.0, 2.0 / 3.0 * w ** 1.5)
        oracle = np.sqrt(w / 3.0) / np.pi * kv
        assert abs(airy_ai(w) - oracle) <= 1e-9 * abs(oracle)

    def test_log_form_large_argument(self):
        w = 200.0 + 40.0j
        lw = log_airy_ai(w)
        assert np.isfinite(lw)
        direct = -(2.0 / 3.0) * w ** 1.5
        assert abs(lw.real - (direct.real - 0.25 * np.log(abs(w)) - 0.5 * np.log(4 * np.pi))) < 1.0


class TestBesselModified:
    def test_half_integer_closed_form(self):
        i_val, _ = bessel_modified(0.5, 2.0)
        oracle = math.sqrt(2.0 / (math.pi * 2.0)) * math.sinh(2.0)
        assert abs(i_val - oracle) <= 1e-12 * oracle

    def test_large_argument_asymptotic(self):
        i_val, _ = bessel_modified(0.0, 30.0)
        assert abs(i_val * math.sqrt(2 * math.pi * 30.0) / math.exp(30.0) - 1.0) < 1e-2

    @pytest.mark.parametrize(
        "order,z",
        [(0.0, 1.5 + 0.5j), (0.5, 2.0 - 1.0j), (1.0, 0.7 + 0.2j), (1.5, 3.0 + 2.0j)],
    )
    def test_wronskian_identity(self, order, z):
        # derivative oracle from the order-raising contiguous relations
        i0, k0 = bessel_modified(order, z)
        ip_, kp_ = bessel_modified(order + 1, z)
        di = ip_ + (order / z) * i0
        dk = -kp_ + (order / z) * k0
        wr = i0 * dk - di * k0
        assert abs(wr - (-1.0 / z)) <= 1e-10 * abs(1.0 / z)

    def test_singular_argument(self):
        with pytest.raises(SingularArgumentError):
            bessel_modified(1.0, 0.0)
