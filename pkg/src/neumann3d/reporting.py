"""Error norms, observed orders and table output."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass
class ConvergenceRow:
    h: float
    N: int
    err_inf: float
    err_l2: float
    order: float | None = None
    iterations: int | None = None
    a_h: float | None = None
    label: str = ""


def error_norms(computed, exact) -> tuple[float, float]:
    """(max |e|, sqrt(mean e^2)) with e = computed - exact."""
    computed = np.asarray(computed, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if computed.shape != exact.shape:
        raise ValueError("fields have different lengths")
    e = computed - exact
    if e.size == 0:
        return 0.0, 0.0
    return float(np.max(np.abs(e))), math.sqrt(math.fsum(e * e) / e.size)


def convergence_order(coarse_l2: float, fine_l2: float) -> float:
    if coarse_l2 <= 0 or fine_l2 <= 0:
        raise ValueError("errors must be positive to define an order")
    return math.log2(coarse_l2 / fine_l2)


def fill_orders(rows: list[ConvergenceRow]) -> list[ConvergenceRow]:
    """Set each row's order against the latest earlier row with the same label, if that row has twice the h."""
    last: dict[str, ConvergenceRow] = {}
    for row in rows:
        prev = last.get(row.label)
        if prev is not None and math.isclose(prev.h, 2.0 * row.h, rel_tol=1e-9):
            row.order = convergence_order(prev.err_l2, row.err_l2)
        last[row.label] = row
    return rows


def format_h(h: float) -> str:
    inv = 1.0 / h
    if abs(inv - round(inv)) < 1e-9:
        return f"1/{round(inv)}"
    return f"{h:.6g}"


def _cells(row: ConvergenceRow, extra: bool) -> list[str]:
    cells = [format_h(row.h), str(row.N), f"{row.err_inf:.2e}", f"{row.err_l2:.2e}",
             "" if row.order is None else f"{row.order:.1f}"]
    if extra:
        cells += ["" if row.iterations is None else str(row.iterations),
                  "" if row.a_h is None else f"{row.a_h:.2e}"]
    return cells


def emit_table(rows: list[ConvergenceRow], format: str = "markdown") -> str:
    """Rows as CSV or an aligned Markdown table (the default)."""
    if not rows:
        raise ValueError("no rows to emit")
    extra = any(r.iterations is not None or r.a_h is not None for r in rows)
    labelled = any(r.label for r in rows)
    header = ["h", "N", "Linf", "L2", "Order"] + (["iters", "a_h"] if extra else [])
    if labelled:
        header = ["case"] + header
    body = [([r.label] if labelled else []) + _cells(r, extra) for r in rows]

    if (format or "markdown") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if format not in ("markdown", "md", ""):
        raise ValueError(f"unknown table format {format!r}")
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    line = lambda cells: "| " + " | ".join(c.rjust(w) for c, w in zip(cells, widths)) + " |"
    out = [line(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(cells) for cells in body]
    return "\n".join(out) + "\n"
