#!/usr/bin/env python3
"""Run the preset experiments and set each L2 error beside its published value.

    python scripts/reproduce_tables.py                 # all five tables, default h lists
    python scripts/reproduce_tables.py table2 table4   # a subset
    python scripts/reproduce_tables.py --extended      # add the slow finer rows

Per-table CSVs go to results/ (or --out-dir).
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from neumann3d.cli import PRESETS, Experiment, build_parser, run_direct_adl, run_solve, specs_from_args
from neumann3d.reference import ERRORS, ORDERS
from neumann3d.reporting import emit_table, format_h


def compare(preset, rows):
    print(f"{'case':32s} {'h':>6s} {'N':>7s} {'L2':>10s} {'ref':>10s} {'ratio':>6s} {'order':>6s} {'ref':>6s}")
    for r in rows:
        inv = round(1 / r.h)
        ref = ERRORS.get((preset, r.label), {}).get(inv)
        ref_order = ORDERS.get((preset, r.label), {}).get(inv)
        ref_l2 = f"{ref[1]:.2e}" if ref else "-"
        ratio = f"{r.err_l2 / ref[1]:.3f}" if ref else "-"
        order = "" if r.order is None else f"{r.order:.2f}"
        print(f"{r.label:32s} {format_h(r.h):>6s} {r.N:7d} {r.err_l2:10.2e} {ref_l2:>10s} {ratio:>6s}"
              f" {order:>6s} {'' if ref_order is None else ref_order:>6}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("tables", nargs="*", metavar="TABLE", help=", ".join(sorted(PRESETS)))
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args(argv)
    unknown = set(args.tables) - set(PRESETS)
    if unknown:
        ap.error(f"unknown table(s): {', '.join(sorted(unknown))}")
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for preset in args.tables or sorted(PRESETS):
        cli_args = ["--preset", preset] + (["--extended"] if args.extended else [])
        specs = specs_from_args(build_parser().parse_args(cli_args))
        t0 = time.perf_counter()
        rows = []
        for spec in specs:
            if spec.experiment is Experiment.DIRECT:
                rows += run_direct_adl(spec)
            else:
                run_solve(spec, rows)
        print(f"\n== {preset} ({time.perf_counter() - t0:.0f} s)")
        compare(preset, rows)
        (args.out_dir / f"{preset}.csv").write_text(emit_table(rows, "csv"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
