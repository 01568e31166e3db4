"""Closed surfaces given as zero sets of level functions.

The level function is negative inside and positive outside, so the outward
unit normal is grad(phi)/|grad(phi)| on every surface.  Level functions and
gradients accept a single point of shape (3,) or a stack of shape (..., 3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

MOLECULE_CENTERS = np.array([
    [math.sqrt(3) / 3, 0.0, -math.sqrt(6) / 12],
    [-math.sqrt(3) / 6, 0.5, -math.sqrt(6) / 12],
    [-math.sqrt(3) / 6, -0.5, -math.sqrt(6) / 12],
    [0.0, 0.0, math.sqrt(6) / 4],
])
MOLECULE_RADIUS = 0.5
MOLECULE_LEVEL = 0.6

ELLIPSOID_COEFFS = (1.0, 4.0, 4.0)


class SurfaceKind(str, Enum):
    SPHERE = "sphere"
    ELLIPSOID = "ellipsoid"
    MOLECULE = "molecule"
    CUSTOM = "custom"


class DegenerateNormalError(ValueError):
    pass


@dataclass(frozen=True)
class Surface:
    """An implicit surface phi(x) = 0 with an analytic gradient.

    ``parameters`` holds the ellipsoid coefficients (a1, a2, a3) of
    a1 x1^2 + a2 x2^2 + a3 x3^2 = 1, or the molecule centers (flattened),
    radius and level.  Custom surfaces supply ``level_fn`` and ``grad_fn``.
    """

    kind: SurfaceKind
    bounding_box: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    parameters: tuple[float, ...] = ()
    level_fn: Callable | None = field(default=None, compare=False, repr=False)
    grad_fn: Callable | None = field(default=None, compare=False, repr=False)
    area: float | None = None
    name: str = ""

    def level(self, p):
        p = np.asarray(p, dtype=float)
        kind = self.kind
        if kind is SurfaceKind.SPHERE:
            return np.sum(p * p, axis=-1) - 1.0
        if kind is SurfaceKind.ELLIPSOID:
            a = np.asarray(self.parameters)
            return np.sum(a * p * p, axis=-1) - 1.0
        if kind is SurfaceKind.MOLECULE:
            centers, r, c = self._molecule()
            d = p[..., None, :] - centers
            return c - np.sum(np.exp(-np.sum(d * d, axis=-1) / r**2), axis=-1)
        return self.level_fn(p)

    def gradient(self, p):
        p = np.asarray(p, dtype=float)
        kind = self.kind
        if kind is SurfaceKind.SPHERE:
            return 2.0 * p
        if kind is SurfaceKind.ELLIPSOID:
            return 2.0 * np.asarray(self.parameters) * p
        if kind is SurfaceKind.MOLECULE:
            centers, r, _ = self._molecule()
            d = p[..., None, :] - centers
            e = np.exp(-np.sum(d * d, axis=-1) / r**2)
            return np.sum((2.0 / r**2) * e[..., None] * d, axis=-2)
        return self.grad_fn(p)

    def normal(self, p):
        """Outward unit normal at surface point(s) p."""
        g = self.gradient(p)
        norm = np.linalg.norm(g, axis=-1, keepdims=True)
        if np.any(norm < 1e-12):
            raise DegenerateNormalError("level-set gradient vanishes on the surface")
        return g / norm

    def _molecule(self):
        *centers, r, c = self.parameters
        return np.reshape(centers, (-1, 3)), r, c


def unit_sphere() -> Surface:
    return Surface(SurfaceKind.SPHERE, ((-1.2, 1.2),) * 3, area=4.0 * math.pi, name="sphere")


def ellipsoid(coeffs=ELLIPSOID_COEFFS) -> Surface:
    a = tuple(float(v) for v in coeffs)
    semi = [1.0 / math.sqrt(v) for v in a]
    box = tuple((-s - 0.2, s + 0.2) for s in semi)
    return Surface(SurfaceKind.ELLIPSOID, box, parameters=a, name="ellipsoid")


def molecule(centers=MOLECULE_CENTERS, radius=MOLECULE_RADIUS, level=MOLECULE_LEVEL) -> Surface:
    params = tuple(np.asarray(centers, dtype=float).ravel()) + (float(radius), float(level))
    return Surface(SurfaceKind.MOLECULE, ((-1.5, 1.5),) * 3, parameters=params, name="molecule")


def custom(level_fn, grad_fn, bounding_box, name="custom", area=None) -> Surface:
    return Surface(SurfaceKind.CUSTOM, tuple(tuple(b) for b in bounding_box),
                   level_fn=level_fn, grad_fn=grad_fn, area=area, name=name)


SURFACES = {"sphere": unit_sphere, "ellipsoid": ellipsoid, "molecule": molecule}


def get_surface(name: str) -> Surface:
    try:
        return SURFACES[name]()
    except KeyError:
        raise ValueError(f"unknown surface {name!r}; choose from {sorted(SURFACES)}") from None


def level_value(surface: Surface, p):
    return surface.level(p)


def gradient(surface: Surface, p):
    return surface.gradient(p)


def unit_normal(surface: Surface, p, tol: float = 1e-10):
    if np.any(np.abs(surface.level(p)) >= tol):
        raise ValueError("point is not on the surface")
    return surface.normal(p)
