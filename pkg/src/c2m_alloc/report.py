"""Plain-text result tables: one column per instance, plus per-manufacturer profits."""
from __future__ import annotations

from typing import Sequence

from .game_toolkit import Comparison
from .suite import InstanceOutcome, SetSummary

PROFIT_ROW = "Post-collaboration total profit"
GAMMA_ROW = "The value of γ"
SHORTAGE_ROW = "Product shortage"


def format_gamma(gamma: float | None, in_core: bool = False) -> str:
    """Two decimals; exactly ``"1"`` for an allocation in the core, ``"-"`` when none exists."""
    if gamma is None:
        return "-"
    if in_core:
        return "1"
    return f"{gamma:.2f}"


def _grid(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def outcome_cells(o: InstanceOutcome) -> tuple[str, str, str]:
    a = o.allocation
    gamma = None if a is None or a.degenerate else a.gamma
    return (
        str(o.total_profit),
        format_gamma(gamma, a is not None and a.in_core),
        "Y" if o.shortage else "N",
    )


def results_table(outcomes: Sequence[InstanceOutcome], title: str = "") -> str:
    """Instances as columns; profit, gamma and shortage as rows."""
    cells = [outcome_cells(o) for o in outcomes]
    rows = [
        ["Instance"] + [str(o.index) for o in outcomes],
        [PROFIT_ROW] + [c[0] for c in cells],
        [GAMMA_ROW] + [c[1] for c in cells],
        [SHORTAGE_ROW] + [c[2] for c in cells],
    ]
    body = _grid(rows)
    return f"{title}\n{body}" if title else body


def profits_table(outcomes: Sequence[InstanceOutcome], title: str = "") -> str:
    """One row per instance with each manufacturer's allocated profit, rounded to integers."""
    N = max(o.instance.manufacturer_count for o in outcomes)
    rows = [["Manufacturer"] + [str(n) for n in range(1, N + 1)]]
    for o in outcomes:
        if o.allocation is None:
            values = ["-"] * o.instance.manufacturer_count
        else:
            values = [f"{p:.0f}" for p in o.allocation.profits]
        rows.append([f"instances {o.index}"] + values + [""] * (N - len(values)))
    body = _grid(rows)
    return f"{title}\n{body}" if title else body


def _fixed(x: float, digits: int) -> str:
    text = f"{x:.{digits}f}"
    # "-0.0000" is rounding noise around zero
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def comparison_table(comp: Comparison, order_values=None) -> str:
    """Per-manufacturer gamma-core and Shapley profits plus core checks for both."""
    N = comp.shapley.values.shape[0]
    header = ["Manufacturer", "Order value", "γ-core profit", "Shapley value"]
    rows = [header]
    for n in range(N):
        ov = "-" if order_values is None else str(order_values[n])
        core = "-" if comp.allocation is None else _fixed(comp.allocation.profits[n], 2)
        rows.append([str(n + 1), ov, core, _fixed(comp.shapley.values[n], 2)])
    lines = [_grid(rows), ""]
    if comp.allocation is not None:
        a, c = comp.allocation, comp.allocation_core
        lines.append(
            f"γ-core allocation: γ = {a.gamma:.6f}, in core: {'yes' if c.in_core else 'no'}, "
            f"worst coalition deficit {_fixed(c.worst_deficit, 4)} (mask {c.worst_coalition})"
        )
    else:
        lines.append(f"γ-core allocation: none ({comp.note})")
    c = comp.shapley_core
    lines.append(
        f"Shapley value: in core: {'yes' if c.in_core else 'no'}, "
        f"worst coalition deficit {_fixed(c.worst_deficit, 4)} (mask {c.worst_coalition})"
    )
    lines.append("Shapley computed with v(empty) = 0")
    return "\n".join(lines)


def summary_table(summaries: Sequence[SetSummary]) -> str:
    rows = [["Set", "Instances", "Mean profit", "γ = 1", "Shortage", "Infeasible", "Degenerate"]]
    for s in summaries:
        rows.append(
            [s.label, str(s.instances), f"{s.mean_profit:.1f}", str(s.in_core), str(s.shortage), str(s.infeasible), str(s.degenerate)]
        )
    total = sum(s.instances for s in summaries)
    rows.append(
        [
            "all",
            str(total),
            f"{sum(s.mean_profit * s.instances for s in summaries) / total:.1f}",
            str(sum(s.in_core for s in summaries)),
            str(sum(s.shortage for s in summaries)),
            str(sum(s.infeasible for s in summaries)),
            str(sum(s.degenerate for s in summaries)),
        ]
    )
    return _grid(rows)
