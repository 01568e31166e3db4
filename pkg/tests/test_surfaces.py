import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neumann3d.surfaces import (
    MOLECULE_CENTERS, DegenerateNormalError, custom, ellipsoid, get_surface, gradient, level_value,
    molecule, unit_normal, unit_sphere,
)

ALL = ["sphere", "ellipsoid", "molecule"]


def test_sphere_level_values():
    s = unit_sphere()
    assert level_value(s, [0, 0, 0]) == -1.0
    assert level_value(s, [1, 0, 0]) == 0.0


def test_molecule_negative_at_atom_center():
    m = molecule()
    assert level_value(m, [0, 0, math.sqrt(6) / 4]) < 0
    # far away the Gaussians vanish and phi -> c
    assert level_value(m, [10, 10, 10]) == pytest.approx(0.6)


def test_ellipsoid_bounding_box():
    assert ellipsoid().bounding_box == ((-1.2, 1.2), (-0.7, 0.7), (-0.7, 0.7))


def test_gradient_examples():
    assert np.allclose(gradient(unit_sphere(), [1, 0, 0]), [2, 0, 0])
    assert np.allclose(gradient(ellipsoid(), [0, 0.5, 0]), [0, 4, 0])


def _fd_gradient(surface, p, step=1e-5):
    g = np.empty(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        g[k] = (surface.level(p + e) - surface.level(p - e)) / (2 * step)
    return g


@pytest.mark.parametrize("name", ALL)
def test_gradient_matches_finite_differences(name):
    s = get_surface(name)
    rng = np.random.default_rng(7)
    lo = np.array([b[0] for b in s.bounding_box])
    hi = np.array([b[1] for b in s.bounding_box])
    for p in rng.uniform(lo, hi, size=(100, 3)):
        g = s.gradient(p)
        fd = _fd_gradient(s, p)
        assert np.linalg.norm(g - fd) <= 1e-6 * max(np.linalg.norm(g), 1e-3)


def test_molecule_gradient_at_spec_point():
    p = np.array([0.3, 0.1, -0.2])
    s = molecule()
    assert np.allclose(s.gradient(p), _fd_gradient(s, p), rtol=1e-7, atol=1e-10)


def test_vectorized_level_matches_pointwise():
    s = molecule()
    pts = np.random.default_rng(1).normal(size=(4, 5, 3))
    stacked = s.level(pts)
    assert stacked.shape == (4, 5)
    assert stacked[2, 3] == s.level(pts[2, 3])


def test_unit_normal_examples():
    r = 1 / math.sqrt(2)
    assert np.allclose(unit_normal(unit_sphere(), [0, 0, 1]), [0, 0, 1])
    assert np.allclose(unit_normal(ellipsoid(), [1, 0, 0]), [1, 0, 0])
    assert np.allclose(unit_normal(unit_sphere(), [r, r, 0]), [r, r, 0])


def test_unit_normal_rejects_off_surface_point():
    with pytest.raises(ValueError):
        unit_normal(unit_sphere(), [0.5, 0, 0])


def test_degenerate_normal_raises():
    flat = custom(lambda p: np.sum(np.asarray(p) ** 2, axis=-1),
                  lambda p: 2 * np.asarray(p, dtype=float), ((-1, 1),) * 3)
    with pytest.raises(DegenerateNormalError):
        unit_normal(flat, [0, 0, 0])


def test_unknown_surface():
    with pytest.raises(ValueError):
        get_surface("torus")


@settings(max_examples=50, deadline=None)
@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_ellipsoid_normals_point_outward(t, p):
    s = ellipsoid()
    x = np.array([math.sin(t) * math.cos(p), 0.5 * math.sin(t) * math.sin(p), 0.5 * math.cos(t)])
    n = s.normal(x)
    assert abs(np.linalg.norm(n) - 1) < 1e-14
    # phi increases along the normal
    assert s.level(x + 1e-6 * n) > s.level(x)


@pytest.mark.parametrize("name", ALL)
def test_sign_convention(name):
    s = get_surface(name)
    inside = MOLECULE_CENTERS[0] if name == "molecule" else np.zeros(3)
    corner = np.array([b[1] for b in s.bounding_box])
    assert s.level(inside) < 0 < s.level(corner)
