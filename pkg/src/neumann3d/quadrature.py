"""Surface quadrature from projections onto the coordinate planes.

For each axis i the surface is intersected with the grid lines
{x_a = j1 h, x_b = j2 h} running parallel to e_i.  An intersection x is kept
when |n(x).e_i| >= cos(theta) and receives the weight

    w(x) = psi_i(n(x)) h^2 / |n(x).e_i|,

where psi_1, psi_2, psi_3 form a smooth partition of unity on the unit
sphere.  Summing f w over the three point sets is a trapezoidal rule with no
boundary, so it converges rapidly for smooth integrands.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .surfaces import Surface

DEFAULT_THETA = math.radians(70.0)
# below this angle the three cones |n.e_i| >= cos(theta) do not cover the sphere
MIN_THETA = math.acos(1.0 / math.sqrt(3.0))

_BISECTION_STEPS = 60
_NEWTON_STEPS = 5
_SAMPLES_PER_CHUNK = 1 << 20


def bump(r):
    """C-infinity bump exp(r^2/(r^2 - 1)) on |r| < 1, zero elsewhere."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    inside = r2 < 1.0
    out = np.zeros_like(r2)
    out[inside] = np.exp(r2[inside] / (r2[inside] - 1.0))
    return out if out.ndim else float(out)


def _cone_profile(s, cos_theta):
    """bump(angle(n, e_i) / theta) inside the cone |n.e_i| > cos(theta), else 0."""
    s = np.asarray(s, dtype=float)
    active = s > cos_theta
    angle = np.arccos(np.clip(s, 0.0, 1.0))
    return np.where(active, bump(angle / math.acos(cos_theta)), 0.0)


def partition_weights(normals, theta=DEFAULT_THETA):
    """psi_1, psi_2, psi_3 for each unit normal; returns shape (..., 3)."""
    n = np.asarray(normals, dtype=float)
    chi = _cone_profile(np.abs(n), math.cos(theta))
    total = np.sum(chi, axis=-1, keepdims=True)
    if np.any(total <= 0.0):
        raise ValueError(f"theta = {math.degrees(theta):.3f} deg leaves directions uncovered")
    return chi / total


def partition_weight(n, i: int, theta=DEFAULT_THETA) -> float:
    """psi_i(n) for a single unit vector; axis i counts from 1."""
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("partition_weight expects a unit vector")
    return float(partition_weights(n, theta)[i - 1])


class QuadraturePoint(NamedTuple):
    position: np.ndarray
    normal: np.ndarray
    weight: float
    axis: int
    grid_index: tuple[int, int]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points, outward normals and weights, ordered by (axis, j1, j2, root)."""

    positions: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    axes: np.ndarray
    grid_indices: np.ndarray
    h: float
    theta: float
    surface: Surface

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, k) -> QuadraturePoint:
        return QuadraturePoint(self.positions[k], self.normals[k], float(self.weights[k]),
                               int(self.axes[k]), tuple(int(j) for j in self.grid_indices[k]))

    @property
    def points(self) -> list[QuadraturePoint]:
        return [self[k] for k in range(len(self))]

    @property
    def total_weight(self) -> float:
        return integrate(self, np.ones(len(self)))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["axis", "j1", "j2", "x", "y", "z", "nx", "ny", "nz", "weight"])
            for k in range(len(self)):
                w.writerow([int(self.axes[k]), *map(int, self.grid_indices[k]),
                            *map(repr, map(float, self.positions[k])),
                            *map(repr, map(float, self.normals[k])), repr(float(self.weights[k]))])


def _other_axes(axis: int) -> tuple[int, int]:
    return tuple(a for a in range(3) if a != axis)


def _line_points(axis, fixed, t):
    """Points with coordinate `axis` = t and the other two set from `fixed`."""
    a, b = _other_axes(axis)
    shape = np.broadcast_shapes(fixed[..., 0].shape, np.shape(t))
    p = np.empty(shape + (3,))
    p[..., axis] = t
    p[..., a] = fixed[..., 0]
    p[..., b] = fixed[..., 1]
    return p


def _roots_on_lines(surface: Surface, axis: int, fixed: np.ndarray, lo: float, hi: float, h: float):
    """All sign changes of phi along the given lines, refined to roots.

    fixed has shape (L, 2).  Returns (line_index, t) sorted by line then t.
    """
    step = 0.5 * h
    n_samples = int(math.ceil((hi - lo) / step)) + 1
    t = lo + step * np.arange(n_samples)
    chunk = max(1, _SAMPLES_PER_CHUNK // n_samples)
    line_ids, lefts = [], []
    for start in range(0, len(fixed), chunk):
        block = fixed[start:start + chunk]
        phi = surface.level(_line_points(axis, block[:, None, :], t[None, :]))
        neg = phi < 0.0
        li, k = np.nonzero(neg[:, :-1] != neg[:, 1:])
        line_ids.append(li + start)
        lefts.append(k)
    line_id = np.concatenate(line_ids)
    k = np.concatenate(lefts)
    if len(line_id) == 0:
        return line_id, np.empty(0)

    pts_fixed = fixed[line_id]

    def phi_at(tt):
        return surface.level(_line_points(axis, pts_fixed, tt))

    a = t[k].copy()
    b = t[k + 1].copy()
    a_neg = phi_at(a) < 0.0
    for _ in range(_BISECTION_STEPS):
        m = 0.5 * (a + b)
        m_neg = phi_at(m) < 0.0
        same = m_neg == a_neg
        a = np.where(same, m, a)
        b = np.where(same, b, m)
    root = 0.5 * (a + b)
    lo_br, hi_br = np.minimum(a, b), np.maximum(a, b)
    val = phi_at(root)
    for _ in range(_NEWTON_STEPS):
        if np.all(np.abs(val) < 1e-15):
            break
        deriv = surface.gradient(_line_points(axis, pts_fixed, root))[:, axis]
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = root - val / deriv
        cand_val = phi_at(cand)
        better = (np.isfinite(cand) & (cand >= lo_br - 1e-15) & (cand <= hi_br + 1e-15)
                  & (np.abs(cand_val) < np.abs(val)))
        root = np.where(better, cand, root)
        val = np.where(better, cand_val, val)
    return line_id, root


def find_roots_along_line(surface: Surface, axis: int, fixed, h: float, bbox=None):
    """Roots of phi along one line parallel to e_axis (axis counts from 1)."""
    bbox = surface.bounding_box if bbox is None else bbox
    ax = axis - 1
    fixed = np.asarray(fixed, dtype=float).reshape(1, 2)
    _, roots = _roots_on_lines(surface, ax, fixed, bbox[ax][0], bbox[ax][1], h)
    return np.sort(roots)


def generate_points(surface: Surface, h: float, theta: float = DEFAULT_THETA) -> QuadratureRule:
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    if not MIN_THETA < theta < 0.5 * math.pi:
        raise ValueError("theta must lie between 54.74 and 90 degrees")
    cos_theta = math.cos(theta)
    box = surface.bounding_box
    parts = []
    for axis in range(3):
        a, b = _other_axes(axis)
        ja = np.arange(math.ceil(box[a][0] / h), math.floor(box[a][1] / h) + 1)
        jb = np.arange(math.ceil(box[b][0] / h), math.floor(box[b][1] / h) + 1)
        J = np.stack(np.meshgrid(ja, jb, indexing="ij"), axis=-1).reshape(-1, 2)
        line_id, root = _roots_on_lines(surface, axis, J * h, box[axis][0], box[axis][1], h)
        pos = _line_points(axis, J[line_id] * h, root)
        nrm = surface.normal(pos)
        keep = np.abs(nrm[:, axis]) >= cos_theta
        pos, nrm, idx = pos[keep], nrm[keep], J[line_id[keep]]
        psi = partition_weights(nrm, theta)[:, axis]
        w = psi * h * h / np.abs(nrm[:, axis])
        parts.append((pos, nrm, w, np.full(len(w), axis + 1), idx))

    rule = QuadratureRule(
        positions=np.concatenate([p[0] for p in parts]),
        normals=np.concatenate([p[1] for p in parts]),
        weights=np.concatenate([p[2] for p in parts]),
        axes=np.concatenate([p[3] for p in parts]),
        grid_indices=np.concatenate([p[4] for p in parts]).astype(np.int64),
        h=float(h), theta=float(theta), surface=surface,
    )
    _check_rule(rule, cos_theta)
    return rule


def _check_rule(rule: QuadratureRule, cos_theta: float):
    if np.any(np.abs(rule.surface.level(rule.positions)) >= 1e-12):
        raise RuntimeError("quadrature point is not on the surface")
    along = np.abs(rule.normals[np.arange(len(rule)), rule.axes - 1])
    if np.any(along < cos_theta):
        raise RuntimeError("quadrature point violates the angle condition")
    if np.any(rule.weights < 0) or np.any(rule.weights > rule.h**2 / cos_theta * (1 + 1e-14)):
        raise RuntimeError("quadrature weight out of range")


def integrate(rule: QuadratureRule, values) -> float:
    values = np.asarray(values, dtype=float)
    if values.shape != rule.weights.shape:
        raise ValueError(f"expected {len(rule)} values, got shape {values.shape}")
    # math.fsum: correctly rounded, so independent of any summation order
    return math.fsum(values * rule.weights)
