import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperres.logspace import (
    LOG_ZERO,
    cancellation_digits,
    from_value,
    log_add,
    log_sub,
    log_sum,
    to_value,
)

finite = st.floats(min_value=-30, max_value=30, allow_nan=False)


@given(finite, finite, finite, finite)
@settings(max_examples=200, deadline=None)
def test_log_add_matches_direct(a, b, c, d):
    z1, z2 = complex(a, b), complex(c, d)
    if z1 == 0 or z2 == 0 or z1 + z2 == 0:
        return
    got = to_value(log_add(from_value(z1), from_value(z2)))
    assert abs(got - (z1 + z2)) <= 1e-12 * abs(z1 + z2)


def test_log_add_extreme_scales():
    w1 = 500.0 + 1.0j
    w2 = -500.0 + 0.3j
    assert abs(complex(log_add(w1, w2)) - w1) < 1e-300


def test_log_sub_and_zero():
    # cancellation bottoms out at the double-precision noise floor
    w = from_value(3.0 + 4.0j)
    assert np.real(log_sub(w, w)) < -30
    assert to_value(LOG_ZERO + 0j) == 0.0


def test_log_sum_axis():
    zs = np.array([[1 + 1j, 2 - 1j, -0.5 + 0.25j]])
    got = to_value(log_sum(from_value(zs), axis=-1))
    assert np.allclose(got, zs.sum(axis=-1))


def test_cancellation_digits():
    ws = from_value(np.array([1.0 + 0j, -1.0 + 1e-8j]))
    digits = cancellation_digits(ws)
    assert 7 < float(digits) < 9
