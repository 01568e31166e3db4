"""Exact solutions used in the convergence studies.

Both test functions are written in rotated coordinates y = M x, where M is
orthogonal, so that the data has no symmetry aligned with the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .surfaces import Surface, ellipsoid, molecule, unit_sphere


def mixing_matrix() -> np.ndarray:
    cols = [math.sqrt(2) * np.array([1.0, 1.0, 1.0]),
            math.sqrt(3) * np.array([0.0, 1.0, -1.0]),
            np.array([-2.0, 1.0, 1.0])]
    return np.column_stack(cols) / math.sqrt(6)


M = mixing_matrix()


def _rotate(x):
    return np.asarray(x, dtype=float) @ M.T


def spherical_harmonic_f(x):
    """1.75 (y1 - 2 y2)(7.5 y3^2 - 1.5), a degree-3 harmonic restricted to |x| = 1."""
    y = _rotate(x)
    return 1.75 * (y[..., 0] - 2.0 * y[..., 1]) * (7.5 * y[..., 2] ** 2 - 1.5)


def _cubic_harmonic(x):
    # r^3 f(x/r): the homogeneous cubic extension of f
    y = _rotate(x)
    r2 = np.sum(y * y, axis=-1)
    return 1.75 * (y[..., 0] - 2.0 * y[..., 1]) * (7.5 * y[..., 2] ** 2 - 1.5 * r2)


def _cubic_harmonic_grad(x):
    y = _rotate(x)
    a = y[..., 0] - 2.0 * y[..., 1]
    b = 7.5 * y[..., 2] ** 2 - 1.5 * np.sum(y * y, axis=-1)
    gy = np.stack([1.75 * (b - 3.0 * a * y[..., 0]),
                   1.75 * (-2.0 * b - 3.0 * a * y[..., 1]),
                   1.75 * a * 12.0 * y[..., 2]], axis=-1)
    return gy @ M


def spherical_harmonic_u(x):
    """Single layer of density f on the unit sphere: -r^3 f/7 inside, -r^-4 f/7 outside."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    cubic = _cubic_harmonic(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        outside = -cubic / np.where(r > 0, r, 1.0) ** 7 / 7.0
    return np.where(r <= 1.0, -cubic / 7.0, outside)


def spherical_harmonic_grad(x):
    """Gradient of the interior branch, -grad(r^3 f(x/r))/7."""
    return -_cubic_harmonic_grad(x) / 7.0


def spherical_harmonic_g(x):
    return -3.0 / 7.0 * spherical_harmonic_f(x)


SQRT5 = math.sqrt(5.0)


def exp_harmonic_u(x):
    """exp(y1 + 2 y2) cos(sqrt(5) y3); harmonic since 1 + 4 - 5 = 0."""
    y = _rotate(x)
    return np.exp(y[..., 0] + 2.0 * y[..., 1]) * np.cos(SQRT5 * y[..., 2])


def exp_harmonic_grad(x):
    y = _rotate(x)
    e = np.exp(y[..., 0] + 2.0 * y[..., 1])
    c = np.cos(SQRT5 * y[..., 2])
    gy = np.stack([e * c, 2.0 * e * c, -SQRT5 * e * np.sin(SQRT5 * y[..., 2])], axis=-1)
    return gy @ M


@dataclass(frozen=True)
class TestCase:
    name: str
    surface: Surface
    exact_u: Callable
    exact_grad_u: Callable
    exact_f: Callable | None = None
    anchor: tuple[float, float, float] = (0.0, 0.0, 0.0)

    __test__ = False  # not a pytest class

    @property
    def anchor_value(self) -> float:
        return float(self.exact_u(np.array(self.anchor)))

    def neumann_data(self, positions, normals):
        if self.exact_f is not None:
            return -3.0 / 7.0 * self.exact_f(positions)
        return np.sum(self.exact_grad_u(positions) * normals, axis=-1)


TESTS = ("harmonic3", "expharmonic")


def get_case(test: str, surface: Surface | str) -> TestCase:
    if isinstance(surface, str):
        surface = {"sphere": unit_sphere, "ellipsoid": ellipsoid, "molecule": molecule}[surface]()
    if test == "harmonic3":
        if surface.name != "sphere":
            raise ValueError("the spherical harmonic test is defined only on the unit sphere")
        return TestCase("harmonic3", surface, spherical_harmonic_u, spherical_harmonic_grad,
                        exact_f=spherical_harmonic_f)
    if test == "expharmonic":
        return TestCase("expharmonic", surface, exp_harmonic_u, exp_harmonic_grad)
    raise ValueError(f"unknown test {test!r}; choose from {TESTS}")
