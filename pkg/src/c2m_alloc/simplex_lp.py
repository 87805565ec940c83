"""Dense two-phase simplex with Bland's anti-cycling rule.

Sized for the allocation models in this package: a handful of structural
variables and up to one constraint row per coalition.  Problems are always
*maximized*.

Example
-------
>>> lp = LinearProgram.from_rows([1, 1], [([1, 0], "<=", 1), ([0, 1], "<=", 2)])
>>> sol = solve_lp(lp)
>>> sol.status, round(sol.objective, 9)
('optimal', 3.0)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

LE, EQ, GE = "<=", "==", ">="
RELATIONS = (LE, EQ, GE)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

PIVOT_TOL = 1e-12
FEAS_TOL = 1e-9
COST_TOL = 1e-10
ZERO_TOL = 1e-11
TIE_PIVOT_RATIO = 1e-6
MAX_ITERATIONS = 50_000


class LpError(RuntimeError):
    pass


class DegeneratePivotError(LpError):
    """No usable pivot element: every candidate is below the pivot threshold."""

    def __init__(self, row: int, value: float):
        self.row = row
        self.value = value
        super().__init__(f"pivot {value:.3e} below threshold {PIVOT_TOL:g} in constraint row {row}")


class NumericalBreakdown(LpError):
    pass


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``max objective @ x`` subject to ``A[k] @ x (relation[k]) rhs[k]`` and bounds.

    ``bounds`` holds one ``(lower, upper)`` pair per variable; use
    ``-math.inf``/``math.inf`` for missing bounds.  The default is ``(0, inf)``.
    """

    objective: np.ndarray
    A: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray
    bounds: tuple[tuple[float, float], ...] = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        n = c.shape[0]
        A = np.asarray(self.A, dtype=float).reshape(-1, n)
        b = np.asarray(self.rhs, dtype=float).reshape(-1)
        rel = tuple(self.relations)
        bounds = tuple((0.0, math.inf) for _ in range(n)) if self.bounds is None else tuple(
            (float(lo), float(hi)) for lo, hi in self.bounds
        )
        if A.shape[0] != b.shape[0] or len(rel) != b.shape[0]:
            raise ValueError("constraint matrix, relations and rhs disagree in length")
        if len(bounds) != n:
            raise ValueError("one (lower, upper) bound pair per variable required")
        if any(r not in RELATIONS for r in rel):
            raise ValueError(f"relations must be one of {RELATIONS}")
        if not (np.isfinite(c).all() and np.isfinite(A).all() and np.isfinite(b).all()):
            raise ValueError("coefficients must be finite")
        for lo, hi in bounds:
            if lo == math.inf or hi == -math.inf or lo > hi or math.isnan(lo) or math.isnan(hi):
                raise ValueError(f"invalid bounds ({lo}, {hi})")
        for name, value in (("objective", c), ("A", A), ("rhs", b)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def from_rows(cls, objective, rows: Sequence[tuple], bounds=None) -> "LinearProgram":
        """Build from ``(coefficients, relation, rhs)`` triples."""
        n = len(objective)
        A = np.array([r[0] for r in rows], dtype=float).reshape(-1, n)
        return cls(objective, A, tuple(r[1] for r in rows), [r[2] for r in rows], bounds)

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def constraints(self) -> list[tuple[np.ndarray, str, float]]:
        return [(self.A[k], self.relations[k], float(self.rhs[k])) for k in range(len(self.relations))]

    def negated(self) -> "LinearProgram":
        """Same feasible set, objective multiplied by -1."""
        return LinearProgram(-self.objective, self.A, self.relations, self.rhs, self.bounds)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{j}" for j in range(self.n_vars)]

        def expr(coeffs):
            terms = [f"{v:+.10g} {names[j]}" for j, v in enumerate(coeffs) if v != 0]
            return " ".join(terms) if terms else "0"

        lines = [f"maximize {expr(self.objective)}", "subject to"]
        for k, (row, rel, rhs) in enumerate(self.constraints):
            lines.append(f"  c{k}: {expr(row)} {rel} {rhs:.10g}")
        lines.append("bounds")
        for name, (lo, hi) in zip(names, self.bounds):
            lines.append(f"  {lo:g} <= {name} <= {hi:g}")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    slack: np.ndarray | None = None  # rhs - Ax for <=, Ax - rhs for >=, |Ax - rhs| for ==
    iterations: int = 0
    pivots: tuple[tuple[int, int, int], ...] = field(default=(), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def constraint_slack(lp: LinearProgram, x) -> np.ndarray:
    """Signed slack per constraint; negative means violated (equalities: ``-|residual|``)."""
    ax = lp.A @ np.asarray(x, dtype=float)
    out = np.empty_like(ax)
    for k, rel in enumerate(lp.relations):
        if rel == LE:
            out[k] = lp.rhs[k] - ax[k]
        elif rel == GE:
            out[k] = ax[k] - lp.rhs[k]
        else:
            out[k] = -abs(ax[k] - lp.rhs[k])
    return out


def is_feasible_point(lp: LinearProgram, x, tol: float = FEAS_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    scale = np.maximum(1.0, np.abs(lp.rhs))
    if (constraint_slack(lp, x) < -tol * scale).any():
        return False
    return all(lo - tol * max(1, abs(lo)) <= v <= hi + tol * max(1, abs(hi)) for v, (lo, hi) in zip(x, lp.bounds))


class _StandardForm:
    """``max c @ y`` s.t. ``A y (rel) b``, ``y >= 0``, ``b >= 0``; ``x = offset + T @ y``."""

    def __init__(self, lp: LinearProgram):
        n = lp.n_vars
        columns = []  # (original index, sign)
        offset = np.zeros(n)
        extra_rows = []
        for j, (lo, hi) in enumerate(lp.bounds):
            if lo > -math.inf:
                offset[j] = lo
                columns.append((j, 1.0))
                if hi < math.inf:
                    extra_rows.append(({len(columns) - 1: 1.0}, hi - lo))
            else:
                columns.append((j, 1.0))
                columns.append((j, -1.0))
                if hi < math.inf:
                    extra_rows.append(({len(columns) - 2: 1.0, len(columns) - 1: -1.0}, hi))
        T = np.zeros((n, len(columns)))
        for k, (j, sign) in enumerate(columns):
            T[j, k] = sign
        A = lp.A @ T
        b = lp.rhs - lp.A @ offset
        rel = list(lp.relations)
        for coeffs, bound in extra_rows:
            row = np.zeros(len(columns))
            for k, v in coeffs.items():
                row[k] = v
            A = np.vstack([A, row])
            b = np.append(b, bound)
            rel.append(LE)
        flip = {LE: GE, GE: LE, EQ: EQ}
        for k in range(len(rel)):
            if b[k] < 0 or (b[k] == 0 and rel[k] == GE):
                A[k] = -A[k]
                b[k] = -b[k]
                rel[k] = flip[rel[k]]
        self.A, self.b, self.rel = A, b, rel
        self.c = lp.objective @ T
        self.c0 = float(lp.objective @ offset)
        self.T, self.offset = T, offset


def solve_lp(lp: LinearProgram, trace: Callable[[str], None] | None = None) -> LpSolution:
    """Maximize ``lp``.

    The tableau is kept in condensed form: one column per *nonbasic*
    variable, so a pivot costs ``O(rows * variables)`` no matter how many
    slack columns the problem has.  Phase 1 maximizes minus the sum of
    artificial variables (only equality rows and ``>=`` rows with a positive
    right-hand side need one); phase 2 optimizes the real objective.
    Entering and leaving variables follow Bland's rule on global variable
    labels, so the pivot sequence is a deterministic function of the input.
    The returned point is recomputed from the final basis with a fresh linear
    solve and its slacks checked at relative tolerance 1e-9.

    ``trace`` receives one line per pivot plus the final tableau.
    """
    sf = _StandardForm(lp)
    m, k = sf.A.shape
    rel = sf.rel
    # global labels: structurals 0..k-1, then one slack/surplus per inequality, then artificials
    slack_of = {}
    label = k
    for i, r in enumerate(rel):
        if r != EQ:
            slack_of[i] = label
            label += 1
    art_start = label
    art_rows = [i for i, r in enumerate(rel) if r != LE]
    n_labels = art_start + len(art_rows)

    # full standard-form columns, used for the final refinement solve
    full = np.zeros((m, art_start))
    full[:, :k] = sf.A
    for i, j in slack_of.items():
        full[i, j] = 1.0 if rel[i] == LE else -1.0

    basis = np.empty(m, dtype=np.int64)
    for i, r in enumerate(rel):
        basis[i] = slack_of[i] if r == LE else art_start + art_rows.index(i)
    nonbasic = list(range(k)) + [slack_of[i] for i in range(m) if rel[i] == GE]
    tab = np.zeros((m + 1, len(nonbasic) + 1))
    tab[:m, :k] = sf.A
    row_of = {j: i for i, j in slack_of.items()}
    for c, j in enumerate(nonbasic[k:], start=k):
        tab[row_of[j], c] = -1.0
    tab[:m, -1] = sf.b
    nonbasic = np.array(nonbasic, dtype=np.int64)
    rows_kept = np.arange(m)

    pivots: list[tuple[int, int, int]] = []
    rhs_scale = max(1.0, float(np.abs(sf.b).max(initial=0.0)))

    def log(msg):
        if trace is not None:
            trace(msg)

    def pivot(r: int, e: int):
        p = tab[r, e]
        col = tab[:, e].copy()
        row = tab[r] / p
        tab[:] -= np.outer(col, row)
        tab[r] = row
        tab[:, e] = -col / p
        tab[r, e] = 1.0 / p
        # roundoff residue must not become a pivot candidate later
        tab[np.abs(tab) < ZERO_TOL] = 0.0
        basis[r], nonbasic[e] = nonbasic[e], basis[r]

    def run(phase: int) -> str:
        while True:
            if len(pivots) >= MAX_ITERATIONS:
                raise NumericalBreakdown(f"iteration limit {MAX_ITERATIONS} reached")
            cost = tab[-1, :-1]
            candidates = np.nonzero(cost > COST_TOL)[0]
            if candidates.size == 0:
                return OPTIMAL
            e = int(candidates[np.argmin(nonbasic[candidates])])
            col = tab[:-1, e]
            usable = np.nonzero(col > PIVOT_TOL)[0]
            if usable.size == 0:
                tiny = np.nonzero(col > 0)[0]
                if tiny.size and col[tiny].max() > 1e-14:
                    r = int(tiny[np.argmax(col[tiny])])
                    raise DegeneratePivotError(int(rows_kept[r]), float(col[r]))
                return UNBOUNDED
            ratios = np.maximum(tab[usable, -1], 0.0) / col[usable]
            best = ratios.min()
            ties = usable[ratios <= best * (1 + 1e-12)]
            # Bland's choice among tied rows, skipping pivots that are tiny next to the alternatives
            ties = ties[col[ties] >= TIE_PIVOT_RATIO * col[ties].max()]
            r = int(ties[np.argmin(basis[ties])])
            entering = int(nonbasic[e])
            pivot(r, e)
            pivots.append((phase, int(rows_kept[r]), entering))
            log(f"phase {phase} pivot {len(pivots)}: row {rows_kept[r]} enters x{entering} objective {-tab[-1, -1]:.12g}")
            if phase == 1 and nonbasic[e] >= art_start:
                drop_column(e)

    def drop_column(e: int):
        nonlocal tab, nonbasic
        keep = np.arange(tab.shape[1]) != e
        tab = tab[:, keep]
        nonbasic = nonbasic[keep[:-1]]

    def set_cost(costs: np.ndarray):
        cb = costs[basis]
        tab[-1, :-1] = costs[nonbasic] - cb @ tab[:-1, :-1]
        tab[-1, -1] = -(cb @ tab[:-1, -1])

    if art_rows:
        c1 = np.zeros(n_labels)
        c1[art_start:] = -1.0
        set_cost(c1)
        run(1)
        infeasibility = float(tab[:-1, -1][basis >= art_start].sum())
        if infeasibility > FEAS_TOL * rhs_scale:
            log(f"phase 1 ends with infeasibility {infeasibility:.3e}")
            return LpSolution(INFEASIBLE, iterations=len(pivots), pivots=tuple(pivots))
        redundant = []
        for i in range(basis.shape[0]):
            if basis[i] < art_start:
                continue
            row = np.abs(tab[i, :-1])
            row[nonbasic >= art_start] = 0.0
            j = int(np.argmax(row)) if row.size else 0
            if row.size and row[j] > FEAS_TOL:
                entering = int(nonbasic[j])
                pivot(i, j)
                pivots.append((1, int(rows_kept[i]), entering))
            else:
                redundant.append(i)
        if redundant:
            log(f"dropping {len(redundant)} redundant rows")
            keep = np.ones(basis.shape[0], dtype=bool)
            keep[redundant] = False
            tab = tab[np.append(keep, True)]
            basis = basis[keep]
            rows_kept = rows_kept[keep]
        art_cols = nonbasic >= art_start
        if art_cols.any():
            tab = tab[:, np.append(~art_cols, True)]
            nonbasic = nonbasic[~art_cols]

    c2 = np.zeros(n_labels)
    c2[:k] = sf.c
    set_cost(c2)
    status = run(2)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=len(pivots), pivots=tuple(pivots))

    y = np.zeros(n_labels)
    y[basis] = tab[:-1, -1]
    try:
        refined = np.linalg.solve(full[np.ix_(rows_kept, basis)], sf.b[rows_kept])
        if np.all(np.isfinite(refined)):
            y[:] = 0.0
            y[basis] = refined
    except np.linalg.LinAlgError:
        log("basis matrix singular; keeping tableau values")
    y = np.maximum(y, 0.0)
    x = sf.offset + sf.T @ y[:k]
    if trace is not None:
        log("final tableau (basic | nonbasic columns " + " ".join(f"x{j}" for j in nonbasic) + " | rhs):")
        for i in range(basis.shape[0]):
            log(f"  x{int(basis[i])} | " + " ".join(f"{v:.6g}" for v in tab[i]))
        log("  obj | " + " ".join(f"{v:.6g}" for v in tab[-1]))
    if not is_feasible_point(lp, x):
        worst = float(constraint_slack(lp, x).min()) if len(lp.relations) else 0.0
        raise NumericalBreakdown(f"recomputed solution violates constraints (worst slack {worst:.3e})")
    return LpSolution(
        OPTIMAL,
        x=x,
        objective=float(lp.objective @ x),
        slack=constraint_slack(lp, x),
        iterations=len(pivots),
        pivots=tuple(pivots),
    )
