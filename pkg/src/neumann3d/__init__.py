"""Interior Neumann problems for Laplace's equation on implicit surfaces.

A smooth quadrature built from grid-line intersections, regularized layer
potentials with singularity reduction, and a fixed-point solver for the
second-kind integral equation.
"""
import warnings

# numba probes TBB first; an old system TBB only means it falls back to OpenMP
warnings.filterwarnings("ignore", message="The TBB threading layer requires")

from .kernels import KernelConfig, KernelMode
from .quadrature import QuadratureRule, generate_points, integrate
from .solver import NonConvergenceError, SolverConfig, solve, solve_and_evaluate
from .surfaces import Surface, get_surface

__all__ = [
    "KernelConfig", "KernelMode", "NonConvergenceError", "QuadratureRule", "SolverConfig",
    "Surface", "generate_points", "get_surface", "integrate", "solve", "solve_and_evaluate",
]
