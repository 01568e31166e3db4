"""Green's function, error function and regularization shape factors.

All scalar routines are numba-compiled so they can be called from the
pairwise summation loops in :mod:`neumann3d.layer_potentials`.

The shape factors are evaluated through a single series,

    erf(rho) = (2/sqrt(pi)) exp(-rho^2) * sum_{n>=0} 2^n rho^(2n+1) / (2n+1)!!

whose terms are all positive.  The leading terms of this series are exactly
the polynomial corrections subtracted by the shape factors, so each factor is
obtained by dropping or adjusting the first one or two terms and no
cancellation occurs near rho = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np

FOUR_PI = 4.0 * math.pi
TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

# Beyond this argument every shape factor is replaced by 1.  The neglected
# amount is below 4e-14 (largest for the fifth-order factors).
RHO_CUTOFF = 6.0

# Below this argument the series form is used for erf and the shape factors.
_SERIES_LIMIT = 1.25

MODE_NONE = 0
MODE_THIRD = 1
MODE_FIFTH = 2
MODE_SINGLE_LAYER = 3


@numba.njit(cache=True)
def _exp_neg_square(x):
    """exp(-x^2) with x^2 split exactly into hi + lo (Dekker product)."""
    split = 134217729.0 * x
    xh = split - (split - x)
    xl = x - xh
    hi = x * x
    lo = ((xh * xh - hi) + 2.0 * xh * xl) + xl * xl
    return math.exp(-hi) * (1.0 - lo)


@numba.njit(cache=True)
def _erf_series_tail(x, first):
    """sum_{n>=first} 2^n x^(2n+1) / (2n+1)!!  (without the exp prefactor)."""
    x2 = x * x
    term = x
    for n in range(1, first + 1):
        term *= 2.0 * x2 / (2 * n + 1)
    total = 0.0
    n = first
    while True:
        total += term
        if term <= 1e-17 * total:
            break
        n += 1
        term *= 2.0 * x2 / (2 * n + 1)
    return total


@numba.njit(cache=True)
def _erfc_cf(x):
    """erfc(x) for x > 0 by the Laplace continued fraction (modified Lentz)."""
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    for k in range(1, 500):
        a = 0.5 * k
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return _exp_neg_square(x) / (math.sqrt(math.pi) * f)


@numba.njit(cache=True)
def erf(x):
    """Error function, accurate to a few ulp for all real x."""
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        val = TWO_OVER_SQRT_PI * _exp_neg_square(ax) * _erf_series_tail(ax, 0)
    elif ax < 6.5:
        val = 1.0 - _erfc_cf(ax)
    else:
        val = 1.0
    return val if x >= 0 else -val


@numba.njit(cache=True)
def erfc(x):
    if x > _SERIES_LIMIT:
        return _erfc_cf(x) if x < 27.0 else 0.0
    return 1.0 - erf(x)


@numba.njit(cache=True)
def shape_third(rho):
    """s(rho) = erf(rho) - (2/sqrt(pi)) rho exp(-rho^2)."""
    if rho >= RHO_CUTOFF:
        return 1.0
    if rho <= _SERIES_LIMIT:
        return TWO_OVER_SQRT_PI * _exp_neg_square(rho) * _erf_series_tail(rho, 1)
    return 1.0 - _erfc_cf(rho) - TWO_OVER_SQRT_PI * rho * math.exp(-rho * rho)


@numba.njit(cache=True)
def shape_fifth(rho):
    """s5(rho) = erf(rho) - (2/sqrt(pi)) (rho - 2 rho^3/3) exp(-rho^2)."""
    if rho >= RHO_CUTOFF:
        return 1.0
    r2 = rho * rho
    if rho <= _SERIES_LIMIT:
        # the n = 1 series term 2 rho^3/3 is added a second time
        return TWO_OVER_SQRT_PI * _exp_neg_square(rho) * (
            4.0 / 3.0 * rho * r2 + _erf_series_tail(rho, 2))
    return 1.0 - _erfc_cf(rho) - TWO_OVER_SQRT_PI * rho * (1.0 - 2.0 / 3.0 * r2) * math.exp(-r2)


@numba.njit(cache=True)
def single_layer_shape(rho):
    """Fifth-order factor for the single layer Green's function.

    s(rho) = erf(rho) - (2/(3 sqrt(pi))) (2 rho^3 - 5 rho) exp(-rho^2)

    The polynomial is fixed by requiring the moments
    int_0^inf (1 - s(rho)) rho^k drho to vanish for k = 0 and k = 2, which
    removes the O(delta) and O(delta^3) terms of the smoothing error of the
    on-surface single layer.  s(rho)/rho -> 16/(3 sqrt(pi)) as rho -> 0.
    """
    if rho >= RHO_CUTOFF:
        return 1.0
    r2 = rho * rho
    if rho <= _SERIES_LIMIT:
        # first two series terms rho + 2 rho^3/3 become 8 rho/3 + 0 rho^3
        return TWO_OVER_SQRT_PI * _exp_neg_square(rho) * (
            8.0 / 3.0 * rho + _erf_series_tail(rho, 2))
    return 1.0 - _erfc_cf(rho) - TWO_OVER_SQRT_PI / 3.0 * rho * (2.0 * r2 - 5.0) * math.exp(-r2)


# lim_{r->0} G(r) * single_layer_shape(r/delta), times delta
SINGLE_LAYER_SELF = -(16.0 / (3.0 * math.sqrt(math.pi))) / FOUR_PI


@numba.njit(cache=True)
def shape(mode, rho):
    if mode == MODE_THIRD:
        return shape_third(rho)
    if mode == MODE_FIFTH:
        return shape_fifth(rho)
    if mode == MODE_SINGLE_LAYER:
        return single_layer_shape(rho)
    return 1.0


_TABLE_INTERVALS = 96
_TABLE_DEGREE = 12
_TABLE_WIDTH = RHO_CUTOFF / _TABLE_INTERVALS


def _build_table():
    """Piecewise Chebyshev interpolants of the three shape factors on [0, RHO_CUTOFF).

    Used only inside the pairwise loops, where the continued fraction is too
    slow; the interpolants match the direct evaluation to about 1e-15.
    """
    from numpy.polynomial import chebyshev

    nodes = np.cos(np.pi * np.arange(_TABLE_DEGREE + 1) / _TABLE_DEGREE)
    table = np.empty((4, _TABLE_INTERVALS, _TABLE_DEGREE + 1))
    table[MODE_NONE] = 0.0
    table[MODE_NONE, :, 0] = 1.0
    for mode, fn in ((MODE_THIRD, shape_third), (MODE_FIFTH, shape_fifth),
                     (MODE_SINGLE_LAYER, single_layer_shape)):
        for i in range(_TABLE_INTERVALS):
            rho = _TABLE_WIDTH * (i + 0.5 * (nodes + 1.0))
            vals = np.array([fn(r) for r in rho])
            table[mode, i] = chebyshev.chebfit(nodes, vals, _TABLE_DEGREE)
    return table


SHAPE_TABLE = _build_table()


@numba.njit(cache=True)
def shape_tabulated(table, mode, rho):
    """Shape factor from SHAPE_TABLE (pass it in); 1 beyond RHO_CUTOFF."""
    if rho >= RHO_CUTOFF:
        return 1.0
    i = int(rho / _TABLE_WIDTH)
    u = 2.0 * (rho - i * _TABLE_WIDTH) / _TABLE_WIDTH - 1.0
    c = table[mode, i]
    b1 = 0.0
    b2 = 0.0
    for k in range(_TABLE_DEGREE, 0, -1):
        b1, b2 = 2.0 * u * b1 - b2 + c[k], b1
    return u * b1 - b2 + c[0]


def green(x) -> float:
    """G(x) = -1/(4 pi |x|)."""
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise ZeroDivisionError("Green's function is singular at x = 0")
    return -1.0 / (FOUR_PI * r)


def adl_kernel(y, n_y, x) -> float:
    """Normal derivative at y of G(x - y): n(y).(y - x) / (4 pi |x - y|^3)."""
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    r = float(np.linalg.norm(d))
    if r == 0.0:
        raise ZeroDivisionError("adjoint double layer kernel is singular at x = y")
    return float(np.dot(n_y, d)) / (FOUR_PI * r**3)


class KernelMode(str, Enum):
    NONE = "none"
    ORDER3 = "order3"
    ORDER5 = "order5"

    @property
    def code(self) -> int:
        return {"none": MODE_NONE, "order3": MODE_THIRD, "order5": MODE_FIFTH}[self.value]


@dataclass(frozen=True)
class KernelConfig:
    """Regularization choice.  delta = c * h**q unless a fixed delta is given."""

    mode: KernelMode = KernelMode.ORDER5
    c: float = 3.0
    q: float = 1.0
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", KernelMode(self.mode))
        if self.delta is not None:
            if self.delta <= 0:
                raise ValueError("fixed delta must be positive")
        else:
            if self.c <= 0:
                raise ValueError("delta coefficient c must be positive")
            if not 0 < self.q <= 1:
                raise ValueError("delta exponent q must lie in (0, 1]")

    def resolve_delta(self, h: float) -> float:
        if self.delta is not None:
            return self.delta
        return self.c * h**self.q

    def describe(self) -> str:
        if self.mode is KernelMode.NONE:
            return "no regularization"
        rule = f"delta={self.delta:g}" if self.delta is not None else (
            f"delta={self.c:g}h" if self.q == 1 else f"delta={self.c:g}h^{self.q:.4g}")
        return f"{self.mode.value}, {rule}"
