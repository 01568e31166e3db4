import math

import numpy as np
import pytest

from neumann3d.analytic import (
    exp_harmonic_grad, exp_harmonic_u, get_case, mixing_matrix, spherical_harmonic_f,
    spherical_harmonic_grad, spherical_harmonic_u,
)
from neumann3d.quadrature import integrate

from conftest import cached_rule

RNG = np.random.default_rng(11)


def _random_unit(n):
    v = RNG.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _laplacian(u, p, step=1e-3):
    total = -6 * u(p)
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        total += u(p + e) + u(p - e)
    return total / step**2


def test_mixing_matrix():
    M = mixing_matrix()
    assert np.allclose(M.T @ M, np.eye(3), atol=1e-15)
    assert np.allclose(np.linalg.norm(M, axis=0), 1)
    assert np.allclose(M @ [1, 0, 0], np.full(3, 1 / math.sqrt(3)))
    assert abs(abs(np.linalg.det(M)) - 1) < 1e-14


def test_spherical_harmonic_f_values():
    assert spherical_harmonic_f(np.array([1.0, 0, 0])) == pytest.approx(-1.010363, abs=1e-6)
    # y1 = 2 y2 along x = M^T (2, 1, 0)
    x = mixing_matrix().T @ np.array([2.0, 1.0, 0.0])
    assert abs(spherical_harmonic_f(x)) < 1e-15


def test_spherical_harmonic_mean_zero(sphere32):
    assert abs(integrate(sphere32, spherical_harmonic_f(sphere32.positions))) < 1e-8


def test_spherical_harmonic_u_branches():
    assert spherical_harmonic_u(np.zeros(3)) == 0.0
    x = _random_unit(20)
    inner = spherical_harmonic_u(x * (1 - 1e-12))
    outer = spherical_harmonic_u(x * (1 + 1e-12))
    assert np.allclose(inner, -spherical_harmonic_f(x) / 7, atol=1e-10)
    assert np.allclose(outer, -spherical_harmonic_f(x) / 7, atol=1e-10)


def test_single_layer_jump():
    # d/dr outside minus d/dr inside equals the density
    eps = 1e-6
    for x in _random_unit(10):
        d_out = (spherical_harmonic_u(x * (1 + 2 * eps)) - spherical_harmonic_u(x * (1 + eps))) / eps
        d_in = (spherical_harmonic_u(x * (1 - eps)) - spherical_harmonic_u(x * (1 - 2 * eps))) / eps
        assert d_out - d_in == pytest.approx(spherical_harmonic_f(x), abs=1e-4)


def test_neumann_data_consistency():
    x = _random_unit(100)
    grad_n = np.sum(spherical_harmonic_grad(x) * x, axis=1)
    assert np.allclose(grad_n, -3 / 7 * spherical_harmonic_f(x), atol=1e-12)


@pytest.mark.parametrize("u", [spherical_harmonic_u, exp_harmonic_u])
def test_harmonic(u):
    for p in RNG.uniform(-0.5, 0.5, size=(50, 3)):
        assert abs(_laplacian(u, p)) <= 1e-5 * (1 + abs(u(p)))


def test_exp_harmonic():
    assert exp_harmonic_u(np.zeros(3)) == 1.0
    h = 1e-6
    for p in RNG.uniform(-1, 1, size=(20, 3)):
        fd = np.array([(exp_harmonic_u(p + h * e) - exp_harmonic_u(p - h * e)) / (2 * h) for e in np.eye(3)])
        assert np.allclose(exp_harmonic_grad(p), fd, rtol=1e-7, atol=1e-8)


@pytest.mark.parametrize("test, surface", [("harmonic3", "sphere"), ("expharmonic", "sphere"),
                                           ("expharmonic", "ellipsoid"), ("expharmonic", "molecule")])
def test_compatibility(test, surface):
    # the discrete mean of g is zero only to the quadrature's accuracy, which improves with h
    case = get_case(test, surface)
    sums = []
    for inv_h in (16, 32):
        rule = cached_rule(surface, inv_h)
        g = case.neumann_data(rule.positions, rule.normals)
        sums.append(abs(integrate(rule, g)))
    assert sums[1] <= 1e-4 * np.max(np.abs(g))
    assert sums[1] <= sums[0] / 4 or sums[1] < 1e-12


def test_cases():
    assert get_case("expharmonic", "ellipsoid").anchor_value == 1.0
    assert get_case("harmonic3", "sphere").anchor_value == 0.0
    with pytest.raises(ValueError):
        get_case("harmonic3", "molecule")
    with pytest.raises(ValueError):
        get_case("cubic", "sphere")
