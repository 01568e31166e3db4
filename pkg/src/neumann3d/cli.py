"""Command-line driver for the convergence experiments.

Two experiments are available.  ``direct`` applies the adjoint double layer
to the exact density of the spherical-harmonic test and compares the left side
of the integral equation with its exact value.  ``solve`` runs the full
Neumann solve and compares the recovered potential (and the density, where it
is known) with the exact solution.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .analytic import TESTS, get_case
from .kernels import KernelConfig, KernelMode
from .layer_potentials import AdjointDoubleLayer
from .quadrature import DEFAULT_THETA, QuadratureRule, generate_points
from .reporting import ConvergenceRow, emit_table, error_norms, fill_orders
from .solver import NonConvergenceError, SolverConfig, solve, solve_and_evaluate
from .surfaces import SURFACES

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_NO_CONVERGENCE = 0, 1, 2


class Experiment(str, Enum):
    DIRECT = "direct"
    SOLVE = "solve"


@dataclass(frozen=True)
class RunSpec:
    surface: str = "sphere"
    test: str = "harmonic3"
    experiment: Experiment = Experiment.SOLVE
    h_list: tuple[float, ...] = (1 / 16, 1 / 32)
    kernel: KernelConfig = KernelConfig()
    solver: SolverConfig = SolverConfig()
    theta: float = DEFAULT_THETA
    output: Path | None = None
    dump_points: Path | None = None
    threads: int = 0

    def __post_init__(self):
        object.__setattr__(self, "experiment", Experiment(self.experiment))
        object.__setattr__(self, "h_list", tuple(float(h) for h in self.h_list))
        if self.surface not in SURFACES:
            raise ValueError(f"unknown surface {self.surface!r}")
        if self.test not in TESTS:
            raise ValueError(f"unknown test {self.test!r}")
        if not self.h_list or any(h <= 0 for h in self.h_list):
            raise ValueError("h list must hold positive values")
        if any(b >= a for a, b in zip(self.h_list, self.h_list[1:])):
            raise ValueError("h list must be strictly decreasing")
        if self.threads < 0:
            raise ValueError("thread count must be >= 0")


def _rule_for(spec: RunSpec, surface, h: float) -> QuadratureRule:
    rule = generate_points(surface, h, spec.theta)
    if spec.dump_points is not None:
        path = Path(spec.dump_points)
        if len(spec.h_list) > 1:
            path = path.with_name(f"{path.stem}_h{round(1 / h)}{path.suffix}")
        rule.write_csv(path)
    log.info("h=%g: %d points", h, len(rule))
    return rule


def run_direct_adl(spec: RunSpec) -> list[ConvergenceRow]:
    """Error of the discrete left side -f/2 + T*f against -(3/7) f for the exact density."""
    if spec.surface != "sphere" or spec.test != "harmonic3":
        raise ValueError("the direct experiment needs the sphere with the harmonic3 test")
    case = get_case(spec.test, spec.surface)
    label = spec.kernel.describe()
    rows = []
    for h in spec.h_list:
        rule = _rule_for(spec, case.surface, h)
        f = case.exact_f(rule.positions)
        g_comp = AdjointDoubleLayer(rule, spec.kernel)(f) - 0.5 * f
        rows.append(ConvergenceRow(h, len(rule), *error_norms(g_comp, -3.0 / 7.0 * f), label=label))
    return fill_orders(rows)


def run_solve(spec: RunSpec, rows: list[ConvergenceRow] | None = None) -> list[ConvergenceRow]:
    """Solve, evaluate u on the surface, compare with the exact solution.

    Rows are appended to ``rows`` as they are produced, so a caller that
    catches NonConvergenceError still holds the partial table.
    """
    case = get_case(spec.test, spec.surface)
    rows = [] if rows is None else rows
    desc = spec.kernel.describe()
    for h in spec.h_list:
        rule = _rule_for(spec, case.surface, h)
        g = case.neumann_data(rule.positions, rule.normals)
        try:
            result = solve(rule, g, spec.solver, spec.kernel)
        except NonConvergenceError as exc:
            r = exc.result
            rows.append(ConvergenceRow(h, len(rule), math.nan, math.nan, None, r.iterations,
                                       r.null_coefficient, f"u: {desc}"))
            fill_orders(rows)
            raise
        u, _ = solve_and_evaluate(rule, g, spec.solver, spec.kernel, case.anchor,
                                  case.anchor_value, result)
        rows.append(ConvergenceRow(h, len(rule), *error_norms(u, case.exact_u(rule.positions)),
                                   iterations=result.iterations, a_h=result.null_coefficient,
                                   label=f"u: {desc}"))
        if case.exact_f is not None:
            rows.append(ConvergenceRow(h, len(rule),
                                       *error_norms(result.density, case.exact_f(rule.positions)),
                                       iterations=result.iterations, a_h=result.null_coefficient,
                                       label=f"f: {desc}"))
    return fill_orders(rows)


_DIRECT_H = (1 / 16, 1 / 32, 1 / 64)
_SOLVE_H = (1 / 16, 1 / 32)

PRESETS = {
    "table1": dict(surface="sphere", test="harmonic3", experiment="direct", h=_DIRECT_H,
                   extra=(1 / 128,),
                   kernels=(KernelConfig(KernelMode.NONE), KernelConfig(KernelMode.ORDER3, c=2.0))),
    "table2": dict(surface="sphere", test="harmonic3", experiment="direct", h=_DIRECT_H,
                   extra=(1 / 128,),
                   kernels=(KernelConfig(KernelMode.ORDER5, c=3.0),
                            KernelConfig(KernelMode.ORDER5, c=1.5, q=0.8))),
    "table3": dict(surface="sphere", test="harmonic3", experiment="solve", h=_SOLVE_H,
                   extra=(1 / 64,), kernels=(KernelConfig(KernelMode.ORDER5, c=3.0),)),
    "table4": dict(surface="ellipsoid", test="expharmonic", experiment="solve", h=_SOLVE_H,
                   extra=(1 / 64,),
                   kernels=(KernelConfig(KernelMode.ORDER5, c=0.75, q=2 / 3),
                            KernelConfig(KernelMode.ORDER5, c=1.5, q=0.8))),
    "table5": dict(surface="molecule", test="expharmonic", experiment="solve", h=_SOLVE_H,
                   extra=(1 / 64,),
                   kernels=(KernelConfig(KernelMode.ORDER5, c=0.75, q=2 / 3),
                            KernelConfig(KernelMode.ORDER5, c=1.5, q=0.8))),
}


def parse_h_list(text: str) -> tuple[float, ...]:
    """'1/16,1/32' -> (0.0625, 0.03125); decimals are accepted too."""
    try:
        return tuple(float(Fraction(item.strip())) for item in text.split(",") if item.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad h list {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="neumann3d", description=__doc__.splitlines()[0])
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--surface", choices=sorted(SURFACES))
    p.add_argument("--test", choices=TESTS)
    p.add_argument("--experiment", choices=[e.value for e in Experiment])
    p.add_argument("--h", type=parse_h_list, help="grid spacings, e.g. 1/16,1/32")
    p.add_argument("--kernel", choices=[m.value for m in KernelMode])
    delta = p.add_mutually_exclusive_group()
    delta.add_argument("--delta-mult", type=float, help="delta = MULT * h")
    delta.add_argument("--delta-c", type=float, help="delta = C * h^Q")
    p.add_argument("--delta-q", type=float, help="exponent Q for --delta-c (default 1)")
    p.add_argument("--theta", type=float, default=math.degrees(DEFAULT_THETA),
                   help="cone half-angle in degrees (default 70)")
    p.add_argument("--beta", type=float, default=SolverConfig.beta)
    p.add_argument("--tol", type=float, default=SolverConfig.tolerance)
    p.add_argument("--max-iter", type=int, default=SolverConfig.max_iterations)
    p.add_argument("--output", type=Path, help="write the table as CSV here")
    p.add_argument("--dump-points", type=Path, help="write each quadrature rule as CSV")
    p.add_argument("--threads", type=int, default=0, help="numba threads (0 = all)")
    p.add_argument("--extended", action="store_true", help="add the finer, slow h rows")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def specs_from_args(args) -> list[RunSpec]:
    preset = PRESETS.get(args.preset, {})
    experiment = args.experiment or preset.get("experiment", "solve")
    h_list = args.h
    if h_list is None:
        h_list = preset.get("h", _DIRECT_H if experiment == "direct" else _SOLVE_H)
        if args.extended:
            h_list = tuple(h_list) + tuple(preset.get("extra", (1 / 64,)))

    if args.delta_q is not None and args.delta_c is None:
        raise ValueError("--delta-q needs --delta-c")
    kernels = preset.get("kernels", (KernelConfig(),))
    if args.kernel or args.delta_mult or args.delta_c:
        base = kernels[0]
        mode = KernelMode(args.kernel) if args.kernel else base.mode
        if args.delta_mult is not None:
            c, q = args.delta_mult, 1.0
        elif args.delta_c is not None:
            c, q = args.delta_c, 1.0 if args.delta_q is None else args.delta_q
        else:
            c, q = base.c, base.q
        kernels = (KernelConfig(mode, c=c, q=q),)

    solver = SolverConfig(args.beta, args.tol, args.max_iter)
    common = dict(surface=args.surface or preset.get("surface", "sphere"),
                  test=args.test or preset.get("test", "harmonic3"),
                  experiment=experiment, h_list=h_list, solver=solver,
                  theta=math.radians(args.theta), output=args.output,
                  dump_points=args.dump_points, threads=args.threads)
    return [RunSpec(kernel=k, **common) for k in kernels]


def _emit(rows, output):
    if not rows:
        return
    sys.stdout.write(emit_table(rows, "markdown"))
    if output is not None:
        Path(output).write_text(emit_table(rows, "csv"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        specs = specs_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))

    if specs[0].threads:
        import numba
        if specs[0].threads > numba.config.NUMBA_NUM_THREADS:
            parser.error(f"--threads exceeds the {numba.config.NUMBA_NUM_THREADS} available")
        numba.set_num_threads(specs[0].threads)

    rows: list[ConvergenceRow] = []
    try:
        for spec in specs:
            if spec.experiment is Experiment.DIRECT:
                rows += run_direct_adl(spec)
            else:
                run_solve(spec, rows)
    except NonConvergenceError as exc:
        _emit(rows, specs[0].output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(rows, specs[0].output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
