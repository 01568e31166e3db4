import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neumann3d import kernels as K

mpmath.mp.dps = 40


def _mp_third(r):
    r = mpmath.mpf(r)
    return mpmath.erf(r) - 2 / mpmath.sqrt(mpmath.pi) * r * mpmath.exp(-r * r)


def _mp_fifth(r):
    r = mpmath.mpf(r)
    return mpmath.erf(r) - 2 / mpmath.sqrt(mpmath.pi) * (r - 2 * r**3 / 3) * mpmath.exp(-r * r)


def _mp_single(r):
    r = mpmath.mpf(r)
    return mpmath.erf(r) - 2 / (3 * mpmath.sqrt(mpmath.pi)) * (2 * r**3 - 5 * r) * mpmath.exp(-r * r)


def test_erf_examples():
    assert K.erf(0.0) == 0.0
    assert abs(K.erf(6.0) - 1.0) < 1e-15
    assert K.erf(1.0) == pytest.approx(0.8427007929497149, rel=1e-15)


def test_erf_relative_error_against_mpmath():
    xs = np.concatenate([np.linspace(-6, 6, 4001), np.geomspace(1e-12, 1e-2, 200)])
    worst = max(abs(K.erf(x) - float(mpmath.erf(x))) / abs(float(mpmath.erf(x)))
                for x in xs if x != 0)
    assert worst < 1e-15


def test_erfc_relative_error_tail():
    for x in np.linspace(1.3, 26, 300):
        ref = float(mpmath.erfc(x))
        assert abs(K.erfc(x) - ref) <= 4e-15 * ref


@settings(max_examples=100)
@given(st.floats(-8, 8, allow_nan=False))
def test_erf_odd(x):
    assert K.erf(-x) + K.erf(x) == 0.0


@pytest.mark.parametrize("fn, oracle", [(K.shape_third, _mp_third), (K.shape_fifth, _mp_fifth),
                                        (K.single_layer_shape, _mp_single)])
def test_shape_factors_against_mpmath(fn, oracle):
    for r in np.linspace(0.01, 5.99, 600):
        assert abs(fn(r) - float(oracle(r))) < 2e-15


def test_shape_examples():
    assert K.shape_third(0.0) == 0.0
    assert K.shape_fifth(0.0) == 0.0
    assert K.shape_third(1.0) == pytest.approx(0.427593295529120, rel=1e-14)
    assert K.shape_fifth(1.0) == pytest.approx(0.704331627142850, rel=1e-14)
    for fn in (K.shape_third, K.shape_fifth, K.single_layer_shape):
        assert abs(1.0 - fn(6.0)) <= 1e-14
        assert all(1.0 - fn(r) <= 1e-14 for r in (6.0, 7.5, 30.0, 1e6))


def test_shape_third_cubic_at_origin():
    for r in np.geomspace(1e-10, 0.1, 100):
        assert abs(K.shape_third(r)) <= r**3


def test_shape_fifth_small_rho_no_cancellation():
    # s5 = (8/(3 sqrt(pi))) rho^3 + O(rho^5) at the origin
    for r in (1e-3, 1e-5, 1e-7):
        assert K.shape_fifth(r) / r**3 == pytest.approx(8 / (3 * math.sqrt(math.pi)), rel=1e-5)


@pytest.mark.parametrize("k", [0, 2])
def test_single_layer_moment_conditions(k):
    # the defining conditions of the single-layer factor
    val = mpmath.quad(lambda r: (1 - _mp_single(r)) * r**k, [0, 3, mpmath.inf])
    assert abs(val) < 1e-30


def test_single_layer_fourth_moment_nonzero():
    val = mpmath.quad(lambda r: (1 - _mp_single(r)) * r**4, [0, 3, mpmath.inf])
    assert abs(val) > 0.1


def test_single_layer_self_value():
    # G(r) s_SL(r/delta) -> SINGLE_LAYER_SELF / delta as r -> 0
    for r in (1e-4, 1e-6):
        g = -K.single_layer_shape(r) / (4 * math.pi * r)
        assert g == pytest.approx(K.SINGLE_LAYER_SELF, rel=1e-6)


def test_tabulated_shape_matches_direct():
    rng = np.random.default_rng(3)
    for mode in (K.MODE_THIRD, K.MODE_FIFTH, K.MODE_SINGLE_LAYER):
        for r in rng.uniform(0, 5.99, 5000):
            assert abs(K.shape_tabulated(K.SHAPE_TABLE, mode, r) - K.shape(mode, r)) < 5e-15
    assert K.shape_tabulated(K.SHAPE_TABLE, K.MODE_NONE, 0.3) == 1.0


def test_green_examples():
    assert K.green([1, 0, 0]) == pytest.approx(-1 / (4 * math.pi))
    assert K.green([0, 2, 0]) == pytest.approx(-1 / (8 * math.pi))
    assert K.green([3, 4, 0]) == pytest.approx(-1 / (20 * math.pi))
    with pytest.raises(ZeroDivisionError):
        K.green([0, 0, 0])


def test_adl_kernel_examples():
    assert K.adl_kernel([0, 0, 1], [0, 0, 1], [1, 0, 0]) == pytest.approx(1 / (8 * math.sqrt(2) * math.pi))
    assert K.adl_kernel([0, 0, 0], [0, 0, 1], [1, 0, 0]) == 0.0
    near = K.adl_kernel([0, 0, 0], [1, 0, 0], [-1, 0, 0])
    far = K.adl_kernel([0, 0, 0], [1, 0, 0], [-2, 0, 0])
    assert far == pytest.approx(near / 4)
    with pytest.raises(ZeroDivisionError):
        K.adl_kernel([1, 0, 0], [1, 0, 0], [1, 0, 0])


def test_kernel_config():
    cfg = K.KernelConfig("order5", c=1.5, q=0.8)
    assert cfg.resolve_delta(1 / 32) == pytest.approx(1.5 * (1 / 32) ** 0.8)
    assert K.KernelConfig(delta=0.1).resolve_delta(1.0) == 0.1
    assert cfg.mode is K.KernelMode.ORDER5
    for bad in (dict(c=0.0), dict(q=1.5), dict(q=0.0), dict(delta=-1.0)):
        with pytest.raises(ValueError):
            K.KernelConfig(**bad)
    assert K.KernelConfig("order3", c=2).describe() == "order3, delta=2h"
