"""Interior Neumann problem by successive approximations.

The second-kind equation  -f/2 + T* f = g  is augmented with a scalar
unknown a multiplying the constant vector, together with the constraint that
f has zero weighted mean.  Each step computes

    f* = (1 - beta) f + 2 beta T* f - 2 beta g,   a = mean_w(f*),   f <- f* - a

and stops when the sup-norm change drops below the tolerance.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelConfig, KernelMode
from .layer_potentials import AdjointDoubleLayer, eval_single_layer_interior, eval_single_layer_on_surface
from .quadrature import QuadratureRule

log = logging.getLogger(__name__)


class NonConvergenceError(RuntimeError):
    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class SolverConfig:
    beta: float = 0.7
    tolerance: float = 1e-8
    max_iterations: int = 500

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.tolerance <= 0 or self.max_iterations < 1:
            raise ValueError("tolerance and max_iterations must be positive")


@dataclass
class SolveResult:
    density: np.ndarray
    null_coefficient: float
    iterations: int
    final_residual: float
    residual_history: list[float] = field(default_factory=list)


def weighted_mean(rule: QuadratureRule, v) -> float:
    v = np.asarray(v, dtype=float)
    if v.shape != rule.weights.shape:
        raise ValueError("field and rule sizes differ")
    return math.fsum(v * rule.weights) / math.fsum(rule.weights)


def solve(rule: QuadratureRule, g, config: SolverConfig = SolverConfig(),
          kernel: KernelConfig = KernelConfig(), callback=None, operator=None) -> SolveResult:
    """Density f_h and null coefficient a_h for Neumann data g at the rule nodes.

    ``callback(n, f, a)`` is called after every iteration.  ``operator`` may
    supply a prebuilt AdjointDoubleLayer for the same rule and kernel.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (len(rule),):
        raise ValueError("Neumann data must have one value per quadrature point")
    g_max = float(np.max(np.abs(g))) if len(g) else 0.0
    if abs(weighted_mean(rule, g)) > 1e-6 * g_max:
        warnings.warn("Neumann data has nonzero mean; the augmented unknown absorbs it",
                      RuntimeWarning, stacklevel=2)
    if kernel.mode is not KernelMode.ORDER5:
        log.info("solving with kernel %s", kernel.describe())

    adl = operator if operator is not None else AdjointDoubleLayer(rule, kernel)
    beta = config.beta
    f = np.zeros(len(rule))
    a = 0.0
    history = []
    for n in range(1, config.max_iterations + 1):
        # the +f/2 inside adl(f) only restores the subtracted Gauss term, so adl(f) is T*f
        f_star = (1.0 - beta) * f + 2.0 * beta * adl(f) - 2.0 * beta * g
        a = weighted_mean(rule, f_star)
        f_new = f_star - a
        change = float(np.max(np.abs(f_new - f)))
        history.append(change)
        f = f_new
        if callback is not None:
            callback(n, f, a)
        log.debug("iteration %d: change %.3e, a_h %.3e", n, change, a)
        if change < config.tolerance:
            return SolveResult(f, a, n, change, history)
    result = SolveResult(f, a, config.max_iterations, history[-1], history)
    raise NonConvergenceError(
        f"no convergence after {config.max_iterations} iterations (change {history[-1]:.3e})", result)


def solve_and_evaluate(rule: QuadratureRule, g, config: SolverConfig = SolverConfig(),
                       kernel: KernelConfig = KernelConfig(), anchor=(0.0, 0.0, 0.0),
                       u_anchor: float = 0.0, result: SolveResult | None = None):
    """Solve for the density, then u at every node shifted so u(anchor) = u_anchor.

    Returns (u, SolveResult).
    """
    if result is None:
        result = solve(rule, g, config, kernel)
    delta = kernel.resolve_delta(rule.h)
    u = eval_single_layer_on_surface(rule, result.density, None, delta)
    u_at_anchor = eval_single_layer_interior(rule, result.density, np.asarray(anchor, float), delta)
    return u - u_at_anchor + u_anchor, result
