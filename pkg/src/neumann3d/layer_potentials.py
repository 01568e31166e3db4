"""On-surface layer potentials by direct O(N^2) summation.

The adjoint double layer is evaluated in the singularity-reduced form

    v(y) = sum_x (f(x) n(y) + f(y) n(x)).(y - x) s(|x-y|/delta) / (4 pi |x-y|^3) w(x)
           + f(y)/2

whose integrand is bounded at x = y.  The self term is dropped: with
regularization it is exactly zero because s(0) = 0, without regularization
the node is skipped.

Sums are split into a plain-kernel pass over all sources, which vectorizes,
and a correction (s - 1) K over the sources within RHO_CUTOFF * delta, found
through a cell list.  Each target's sums run serially in a fixed source
order, so results do not depend on the number of threads.
"""
from __future__ import annotations

import math

import numba
import numpy as np

from .kernels import (FOUR_PI, MODE_NONE, MODE_SINGLE_LAYER, RHO_CUTOFF, SINGLE_LAYER_SELF,
                      SHAPE_TABLE, KernelConfig, KernelMode, shape_tabulated)
from .quadrature import QuadratureRule

INTERIOR_MIN_DISTANCE = 5.0


# reassociation lets LLVM vectorize the far-field reductions
_FAST = {"reassoc", "contract", "nsz"}


def _cell_list(pos, size):
    """Sort nodes into cubic cells of the given size.

    Returns (order, starts, dims, origin): nodes of cell c are
    order[starts[c]:starts[c+1]], in increasing node index.
    """
    origin = pos.min(axis=0) - 1e-9
    dims = np.floor((pos.max(axis=0) - origin) / size).astype(np.int64) + 1
    ijk = np.floor((pos - origin) / size).astype(np.int64)
    key = (ijk[:, 0] * dims[1] + ijk[:, 1]) * dims[2] + ijk[:, 2]
    order = np.argsort(key, kind="stable").astype(np.int64)
    starts = np.searchsorted(key[order], np.arange(dims.prod() + 1)).astype(np.int64)
    return order, starts, dims, origin


@numba.njit(parallel=True, fastmath=_FAST, cache=True)
def _adl_far(x, y, z, nx, ny, nz, w, f, targets, want_f, want_gauss):
    """Unregularized sums over all sources (the self pair contributes 0):

        P(y) = sum_x f(x) w(x) n(y).(y-x) / (4 pi r^3)
        D(y) = sum_x      w(x) n(x).(y-x) / (4 pi r^3)
    """
    nt = targets.shape[0]
    ns = x.shape[0]
    P = np.zeros(nt)
    D = np.zeros(nt)
    wf = w * f
    for it in numba.prange(nt):
        t = targets[it]
        y0, y1, y2 = x[t], y[t], z[t]
        m0, m1, m2 = nx[t], ny[t], nz[t]
        acc_p = 0.0
        acc_d = 0.0
        if want_f:
            for j in range(ns):
                d0 = y0 - x[j]
                d1 = y1 - y[j]
                d2 = y2 - z[j]
                r2 = d0 * d0 + d1 * d1 + d2 * d2
                r2 = r2 if r2 > 0.0 else 1.0
                acc_p += wf[j] * (m0 * d0 + m1 * d1 + m2 * d2) / (r2 * math.sqrt(r2))
        if want_gauss:
            for j in range(ns):
                d0 = y0 - x[j]
                d1 = y1 - y[j]
                d2 = y2 - z[j]
                r2 = d0 * d0 + d1 * d1 + d2 * d2
                r2 = r2 if r2 > 0.0 else 1.0
                acc_d += w[j] * (nx[j] * d0 + ny[j] * d1 + nz[j] * d2) / (r2 * math.sqrt(r2))
        P[it] = acc_p / FOUR_PI
        D[it] = acc_d / FOUR_PI
    return P, D


@numba.njit(parallel=True, cache=True)
def _adl_near(pos, nrm, w, f, targets, delta, mode, table, order, starts, dims, origin,
              want_f, want_gauss):
    """Add (s(r/delta) - 1) times the plain kernel for pairs with 0 < r < cutoff."""
    nt = targets.shape[0]
    P = np.zeros(nt)
    D = np.zeros(nt)
    r_cut = RHO_CUTOFF * delta
    inv_delta = 1.0 / delta
    for it in numba.prange(nt):
        t = targets[it]
        c0 = int((pos[t, 0] - origin[0]) / r_cut)
        c1 = int((pos[t, 1] - origin[1]) / r_cut)
        c2 = int((pos[t, 2] - origin[2]) / r_cut)
        acc_p = 0.0
        acc_d = 0.0
        for a in range(max(c0 - 1, 0), min(c0 + 2, dims[0])):
            for b in range(max(c1 - 1, 0), min(c1 + 2, dims[1])):
                for c in range(max(c2 - 1, 0), min(c2 + 2, dims[2])):
                    cell = (a * dims[1] + b) * dims[2] + c
                    for k in range(starts[cell], starts[cell + 1]):
                        j = order[k]
                        d0 = pos[t, 0] - pos[j, 0]
                        d1 = pos[t, 1] - pos[j, 1]
                        d2 = pos[t, 2] - pos[j, 2]
                        r2 = d0 * d0 + d1 * d1 + d2 * d2
                        if r2 == 0.0 or r2 >= r_cut * r_cut:
                            continue
                        r = math.sqrt(r2)
                        k_corr = (shape_tabulated(table, mode, r * inv_delta) - 1.0) * w[j] / (r2 * r)
                        if want_f:
                            acc_p += f[j] * k_corr * (nrm[t, 0] * d0 + nrm[t, 1] * d1 + nrm[t, 2] * d2)
                        if want_gauss:
                            acc_d += k_corr * (nrm[j, 0] * d0 + nrm[j, 1] * d1 + nrm[j, 2] * d2)
        P[it] = acc_p / FOUR_PI
        D[it] = acc_d / FOUR_PI
    return P, D


@numba.njit(parallel=True, fastmath=_FAST, cache=True)
def _single_layer_far(x, y, z, wf, points):
    """sum_x -w(x) f(x) / (4 pi |x - p|), skipping coincident nodes."""
    out = np.zeros(points.shape[0])
    ns = x.shape[0]
    for i in numba.prange(points.shape[0]):
        p0, p1, p2 = points[i, 0], points[i, 1], points[i, 2]
        acc = 0.0
        for j in range(ns):
            d0 = p0 - x[j]
            d1 = p1 - y[j]
            d2 = p2 - z[j]
            r2 = d0 * d0 + d1 * d1 + d2 * d2
            v = wf[j] / math.sqrt(r2 if r2 > 0.0 else 1.0)
            acc += v if r2 > 0.0 else 0.0
        out[i] = -acc / FOUR_PI
    return out


@numba.njit(parallel=True, cache=True)
def _single_layer_near(pos, wf, targets, delta, table, order, starts, dims, origin):
    """Regularization correction and self value of the on-surface single layer."""
    nt = targets.shape[0]
    out = np.zeros(nt)
    r_cut = RHO_CUTOFF * delta
    inv_delta = 1.0 / delta
    for it in numba.prange(nt):
        t = targets[it]
        c0 = int((pos[t, 0] - origin[0]) / r_cut)
        c1 = int((pos[t, 1] - origin[1]) / r_cut)
        c2 = int((pos[t, 2] - origin[2]) / r_cut)
        acc = SINGLE_LAYER_SELF * inv_delta * wf[t]
        for a in range(max(c0 - 1, 0), min(c0 + 2, dims[0])):
            for b in range(max(c1 - 1, 0), min(c1 + 2, dims[1])):
                for c in range(max(c2 - 1, 0), min(c2 + 2, dims[2])):
                    cell = (a * dims[1] + b) * dims[2] + c
                    for k in range(starts[cell], starts[cell + 1]):
                        j = order[k]
                        d0 = pos[t, 0] - pos[j, 0]
                        d1 = pos[t, 1] - pos[j, 1]
                        d2 = pos[t, 2] - pos[j, 2]
                        r2 = d0 * d0 + d1 * d1 + d2 * d2
                        if r2 == 0.0 or r2 >= r_cut * r_cut:
                            continue
                        r = math.sqrt(r2)
                        acc -= (shape_tabulated(table, MODE_SINGLE_LAYER, r * inv_delta) - 1.0) * wf[j] / (FOUR_PI * r)
        out[it] = acc
    return out


class _Geometry:
    """Contiguous per-coordinate copies of a rule's nodes for the kernels."""

    def __init__(self, rule: QuadratureRule):
        self.pos = np.ascontiguousarray(rule.positions)
        self.nrm = np.ascontiguousarray(rule.normals)
        self.w = np.ascontiguousarray(rule.weights)
        self.xyz = tuple(np.ascontiguousarray(rule.positions[:, i]) for i in range(3))
        self.nxyz = tuple(np.ascontiguousarray(rule.normals[:, i]) for i in range(3))
        self._cells = {}

    def cells(self, delta):
        if delta not in self._cells:
            self._cells[delta] = _cell_list(self.pos, RHO_CUTOFF * delta)
        return self._cells[delta]

    def adl_sums(self, f, targets, delta, mode, want_f, want_gauss):
        P, D = _adl_far(*self.xyz, *self.nxyz, self.w, f, targets, want_f, want_gauss)
        if mode != MODE_NONE:
            Pn, Dn = _adl_near(self.pos, self.nrm, self.w, f, targets, delta, mode, SHAPE_TABLE,
                               *self.cells(delta), want_f, want_gauss)
            P += Pn
            D += Dn
        return P, D

    def single_layer(self, f, targets, delta):
        wf = self.w * f
        u = _single_layer_far(*self.xyz, wf, self.pos[targets])
        return u + _single_layer_near(self.pos, wf, targets, delta, SHAPE_TABLE, *self.cells(delta))


def _field(rule: QuadratureRule, f) -> np.ndarray:
    f = np.ascontiguousarray(f, dtype=float)
    if f.shape != (len(rule),):
        raise ValueError(f"field has shape {f.shape}, rule has {len(rule)} points")
    return f


def _targets(rule: QuadratureRule, targets) -> np.ndarray:
    if targets is None:
        return np.arange(len(rule), dtype=np.int64)
    t = np.atleast_1d(np.asarray(targets, dtype=np.int64))
    if np.any((t < 0) | (t >= len(rule))):
        raise IndexError("target index out of range")
    return t


def _mode_and_delta(rule: QuadratureRule, config: KernelConfig):
    if config.mode is KernelMode.NONE:
        return MODE_NONE, 0.0
    return config.mode.code, config.resolve_delta(rule.h)


def gauss_sums(rule: QuadratureRule, config: KernelConfig, targets=None) -> np.ndarray:
    """sum_x n(x).(x - y) s(r/delta)/(4 pi r^3) w(x); tends to 1/2 on the surface."""
    mode, delta = _mode_and_delta(rule, config)
    t = _targets(rule, targets)
    _, D = _Geometry(rule).adl_sums(np.zeros(len(rule)), t, delta, mode, False, True)
    return -D


class AdjointDoubleLayer:
    """Matrix-free modified adjoint double layer on a fixed rule.

    The f-independent part sum_x n(x).(y-x) K w (minus the Gauss sum) is
    computed once; each application then costs one pass over all pairs.
    """

    def __init__(self, rule: QuadratureRule, config: KernelConfig):
        self.rule = rule
        self.config = config
        self.mode, self.delta = _mode_and_delta(rule, config)
        self._all = np.arange(len(rule), dtype=np.int64)
        self._geom = _Geometry(rule)
        _, self.gauss_part = self._geom.adl_sums(np.zeros(len(rule)), self._all, self.delta,
                                                 self.mode, False, True)

    def __call__(self, f) -> np.ndarray:
        """v(y) at every node; this is T*f, the +f(y)/2 balancing the Gauss term."""
        f = _field(self.rule, f)
        P, _ = self._geom.adl_sums(f, self._all, self.delta, self.mode, True, False)
        return P + f * self.gauss_part + 0.5 * f


def eval_adl_modified(rule: QuadratureRule, f, target_index, config: KernelConfig):
    """Regularized, singularity-reduced adjoint double layer at rule node(s)."""
    f = _field(rule, f)
    t = _targets(rule, target_index)
    mode, delta = _mode_and_delta(rule, config)
    P, D = _Geometry(rule).adl_sums(f, t, delta, mode, True, True)
    v = P + f[t] * D + 0.5 * f[t]
    return float(v[0]) if np.ndim(target_index) == 0 else v


def eval_adl_unregularized(rule: QuadratureRule, f, target_index):
    return eval_adl_modified(rule, f, target_index, KernelConfig(KernelMode.NONE))


def apply_adjoint_operator(rule: QuadratureRule, f, config: KernelConfig) -> np.ndarray:
    """T* f at every node, computed in singularity-reduced regularized form."""
    return AdjointDoubleLayer(rule, config)(f)


def eval_single_layer_on_surface(rule: QuadratureRule, f, target_index=None, delta=None):
    """Regularized single layer sum_x G_delta(x - y) f(x) w(x) at rule node(s)."""
    if delta is None or delta <= 0:
        raise ValueError("single layer regularization needs delta > 0")
    f = _field(rule, f)
    t = _targets(rule, target_index)
    u = _Geometry(rule).single_layer(f, t, float(delta))
    return float(u[0]) if target_index is not None and np.ndim(target_index) == 0 else u


def eval_single_layer_interior(rule: QuadratureRule, f, x0, delta: float | None = None):
    """Plain quadrature of the single layer at interior point(s) away from S.

    The integrand is smooth on the grid scale only if the point keeps a
    distance of several h from every node, so closer points are rejected.
    ``delta`` is accepted for symmetry with the on-surface call; no
    regularization is applied.
    """
    f = _field(rule, f)
    pts = np.atleast_2d(np.asarray(x0, dtype=float))
    if np.any(rule.surface.level(pts) >= 0):
        raise ValueError("evaluation point is not inside the surface")
    dmin = np.array([np.min(np.linalg.norm(rule.positions - p, axis=1)) for p in pts])
    if np.any(dmin <= INTERIOR_MIN_DISTANCE * rule.h):
        raise ValueError(f"evaluation point lies within {INTERIOR_MIN_DISTANCE} h of the surface")
    u = _single_layer_far(*(np.ascontiguousarray(rule.positions[:, i]) for i in range(3)),
                          rule.weights * f, pts)
    return float(u[0]) if np.ndim(x0) == 1 else u
