"""gamma-approximate core profit allocation.

Phase 1 solves

    max gamma
    s.t. p >= 0,  sum(p) = v(N),
         sum_{n in S} p_n >= gamma * v(S)      for every nonempty S,
         p ordered like the order values,      gamma <= 1

where the order value of manufacturer ``n`` is the sales value of the orders
it fulfils in the grand-coalition plan.  Manufacturers are ranked by order
value (descending, ties by index); consecutive ranks get ``p_a >= p_b`` and
tied order values get ``p_a == p_b``.

Phase 2 keeps every phase-1 constraint, requires ``gamma >= gamma*`` and
maximizes the smallest profit, which picks one profit vector out of the
usually non-unique optimal face.

Profits are solved in units of ``max(1, |v(N)|)`` to keep the LP well scaled.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coalition_values import CharacteristicFunction, coalition_sums
from .model import Instance
from .simplex_lp import EQ, GE, LE, LinearProgram, solve_lp

BUDGET_TOL = 1e-6
NONNEG_TOL = 1e-9
COALITION_TOL = 1e-6
ORDER_TOL = 1e-9
TIE_TOL = 1e-6
CORE_TOL = 1e-9
MAXIMALITY_STEP = 1e-4


class AllocationInfeasible(RuntimeError):
    """No nonnegative budget-balanced allocation exists (grand value < 0)."""

    def __init__(self, message: str, grand_value: float):
        self.grand_value = grand_value
        super().__init__(message)


class DegenerateAllocationWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class AllocationResult:
    profits: np.ndarray
    gamma: float
    order_values: np.ndarray
    binding_coalitions: list[int]
    in_core: bool
    degenerate: bool = False
    phase2_min_profit: float | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "gamma": float(self.gamma),
            "profits": [float(p) for p in self.profits],
            "order_values": [int(v) if float(v).is_integer() else float(v) for v in self.order_values],
            "in_core": bool(self.in_core),
            "binding_coalitions": [int(m) for m in self.binding_coalitions],
        }


def order_values(inst: Instance, cf: CharacteristicFunction) -> np.ndarray:
    if cf.grand_plan is None:
        raise ValueError("characteristic function carries no grand-coalition plan")
    return cf.grand_plan.order_values(inst.ask_price)


def ranking(values) -> list[int]:
    """Manufacturers by order value, largest first; equal values keep index order."""
    values = np.asarray(values)
    return sorted(range(len(values)), key=lambda n: (-values[n], n))


def _ordering_rows(values, width: int) -> list[tuple]:
    rows = []
    order = ranking(values)
    for a, b in zip(order, order[1:]):
        row = np.zeros(width)
        row[a], row[b] = 1.0, -1.0
        rows.append((row, EQ if values[a] == values[b] else GE, 0.0))
    return rows


def _base_rows(cf: CharacteristicFunction, values, scale: float, width: int, gamma_col: int | None, gamma_value=None):
    """Budget, coalition and ordering rows over ``width`` columns (profits first)."""
    N = cf.n
    masks = np.arange(1, cf.full_mask + 1)
    member = (masks[:, None] >> np.arange(N)) & 1
    worth = cf.values[1:].astype(float) / scale

    budget = np.zeros(width)
    budget[:N] = 1.0
    rows = [(budget, EQ, cf.grand_value / scale)]
    A = np.zeros((masks.shape[0], width))
    A[:, :N] = member
    if gamma_col is not None:
        A[:, gamma_col] = -worth
        rhs = np.zeros(masks.shape[0])
    else:
        rhs = gamma_value * worth
    rows.extend((A[k], GE, rhs[k]) for k in range(A.shape[0]))
    rows.extend(_ordering_rows(values, width))
    return rows


def pap_program(cf: CharacteristicFunction, values, scale: float | None = None) -> LinearProgram:
    """Phase-1 LP over ``(p_1 .. p_N, gamma)`` with profits divided by ``scale``."""
    N = cf.n
    scale = _scale(cf) if scale is None else scale
    objective = np.zeros(N + 1)
    objective[N] = 1.0
    rows = _base_rows(cf, values, scale, N + 1, gamma_col=N)
    bounds = [(0.0, math.inf)] * N + [(-math.inf, 1.0)]
    return LinearProgram.from_rows(objective, rows, bounds)


def fixed_gamma_program(cf: CharacteristicFunction, values, gamma: float, scale: float | None = None) -> LinearProgram:
    """Feasibility LP (zero objective) for the allocation constraints at a fixed gamma."""
    N = cf.n
    scale = _scale(cf) if scale is None else scale
    rows = _base_rows(cf, values, scale, N, gamma_col=None, gamma_value=gamma)
    return LinearProgram.from_rows(np.zeros(N), rows)


def _scale(cf: CharacteristicFunction) -> float:
    return max(1.0, abs(float(cf.grand_value)))


def allocate_game(
    cf: CharacteristicFunction,
    values,
    trace: Callable[[str], None] | None = None,
) -> AllocationResult:
    """Allocate ``v(N)`` for a game given its characteristic function and order values."""
    N = cf.n
    values = np.asarray(values)
    if values.shape != (N,):
        raise ValueError(f"expected {N} order values, got shape {values.shape}")
    grand = float(cf.grand_value)
    if grand < 0:
        raise AllocationInfeasible(
            f"grand-coalition profit {grand:g} is negative; no nonnegative budget-balanced allocation exists",
            grand,
        )
    scale = _scale(cf)

    lp1 = pap_program(cf, values, scale)
    if trace is not None:
        trace("# phase 1: maximize gamma (profits in units of %g)" % scale)
        trace(lp1.to_text([f"p{n + 1}" for n in range(N)] + ["gamma"]))
    sol1 = solve_lp(lp1, trace=trace)
    if not sol1.optimal:
        raise AllocationInfeasible(f"phase-1 LP is {sol1.status}", grand)
    gamma = min(float(sol1.x[N]), 1.0)

    # phase 2: columns (p_1 .. p_N, gamma, t)
    width = N + 2
    rows = [(np.append(row, 0.0), rel, rhs) for row, rel, rhs in lp1.constraints]
    floor = np.zeros(width)
    floor[N] = 1.0
    rows.append((floor, GE, gamma))
    for n in range(N):
        row = np.zeros(width)
        row[N + 1], row[n] = 1.0, -1.0
        rows.append((row, LE, 0.0))
    objective = np.zeros(width)
    objective[N + 1] = 1.0
    bounds = list(lp1.bounds) + [(-math.inf, math.inf)]
    lp2 = LinearProgram.from_rows(objective, rows, bounds)
    if trace is not None:
        trace("# phase 2: maximize the smallest profit at gamma >= %.12g" % gamma)
    sol2 = solve_lp(lp2, trace=trace)
    if sol2.optimal:
        x = sol2.x[:N]
        min_profit = float(sol2.x[N + 1]) * scale
    else:  # cannot happen in exact arithmetic: the phase-1 optimum is feasible here
        warnings.warn(f"phase-2 LP is {sol2.status}; keeping the phase-1 allocation", DegenerateAllocationWarning)
        x = sol1.x[:N]
        min_profit = None
    profits = x * scale

    degenerate = gamma <= 0
    if degenerate:
        warnings.warn(
            f"maximal gamma is {gamma:.3g} <= 0; no gamma-approximate core allocation with gamma > 0",
            DegenerateAllocationWarning,
        )
    sums = coalition_sums(profits)
    worth = cf.values.astype(float)
    tight = sums - gamma * worth <= COALITION_TOL * np.maximum(1.0, np.abs(worth))
    binding = [int(m) for m in np.nonzero(tight)[0] if m != 0]
    return AllocationResult(
        profits=profits,
        gamma=gamma,
        order_values=values,
        binding_coalitions=binding,
        in_core=bool(not degenerate and gamma >= 1.0 - CORE_TOL),
        degenerate=degenerate,
        phase2_min_profit=min_profit,
    )


def allocate(inst: Instance, cf: CharacteristicFunction, trace: Callable[[str], None] | None = None) -> AllocationResult:
    """Allocate the grand-coalition profit of ``inst`` among its manufacturers."""
    return allocate_game(cf, order_values(inst, cf), trace=trace)


# --------------------------------------------------------------------------- #
# verification
# --------------------------------------------------------------------------- #


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed:
            self.failures.append(f"{name}: {detail}" if detail else name)


def gamma_is_maximal(cf: CharacteristicFunction, values, gamma: float, step: float = MAXIMALITY_STEP) -> bool:
    """True when no allocation satisfies the constraints at ``gamma + step``.

    Beyond 1 the answer follows from the domain of gamma.  Otherwise the
    check solves the phase-1 system with gamma left free above and an extra
    row ``gamma >= target``.  For a nonnegative target this is equivalent to
    fixing gamma: with ``p >= 0`` every row of a coalition with negative value
    holds for any ``gamma >= 0``, and the remaining rows only tighten as
    gamma grows, so the feasible set shrinks monotonically in gamma.
    """
    target = gamma + step
    if target > 1.0:
        return True
    if cf.grand_value < 0:
        return True
    if target < 0:
        return solve_lp(fixed_gamma_program(cf, values, target)).status == "infeasible"
    lp = pap_program(cf, values)
    N = cf.n
    floor = np.zeros(N + 1)
    floor[N] = 1.0
    rows = lp.constraints + [(floor, GE, target)]
    bounds = list(lp.bounds[:N]) + [(-math.inf, math.inf)]
    return solve_lp(LinearProgram.from_rows(lp.objective, rows, bounds)).status == "infeasible"


def verify_allocation(inst: Instance | None, cf: CharacteristicFunction, result: AllocationResult) -> VerificationReport:
    """Recheck an allocation by direct summation over every coalition.

    When ``inst`` is given the order values are recomputed from the grand
    plan instead of trusting ``result.order_values``.
    """
    report = VerificationReport()
    p = np.asarray(result.profits, dtype=float)
    N = cf.n
    gamma = float(result.gamma)
    if p.shape != (N,):
        report.record("shape", False, f"{p.shape} profits for {N} manufacturers")
        return report

    values = np.asarray(result.order_values)
    if inst is not None:
        values = order_values(inst, cf)
        report.record(
            "order_values",
            np.array_equal(values, np.asarray(result.order_values)),
            "reported order values differ from the grand plan",
        )

    total = float(p.sum())
    grand = float(cf.grand_value)
    report.record("budget_balance", abs(total - grand) <= BUDGET_TOL, f"sum of profits {total!r} != {grand!r}")
    worst = float(p.min())
    report.record("nonnegative", worst >= -NONNEG_TOL, f"smallest profit {worst!r}")
    if result.degenerate:
        report.record("gamma_range", gamma <= 0 and not result.in_core, "degenerate flag inconsistent with gamma")
    else:
        report.record("gamma_range", 0 < gamma <= 1 + CORE_TOL, f"gamma {gamma!r} outside (0, 1]")

    sums = coalition_sums(p)
    worth = cf.values.astype(float)
    deficit = sums[1:] - (gamma * worth[1:] - COALITION_TOL * np.maximum(1.0, np.abs(worth[1:])))
    bad = np.nonzero(deficit < 0)[0]
    report.record(
        "coalition_rationality",
        bad.size == 0,
        f"{bad.size} coalitions below gamma * value, first mask {int(bad[0]) + 1}" if bad.size else "",
    )

    for n in range(N):
        for m in range(N):
            if n == m:
                continue
            if values[n] > values[m] and p[n] < p[m] - ORDER_TOL:
                report.record("order_monotone", False, f"manufacturer {n + 1} outranks {m + 1} but earns less")
            if values[n] == values[m] and n < m and abs(p[n] - p[m]) > TIE_TOL:
                report.record("order_ties", False, f"manufacturers {n + 1} and {m + 1} tie but earn differently")
    report.checks.setdefault("order_monotone", True)
    report.checks.setdefault("order_ties", True)

    report.record(
        "in_core_flag",
        result.in_core == (not result.degenerate and gamma >= 1 - CORE_TOL),
        "in_core disagrees with gamma",
    )
    if not result.degenerate:
        report.record("gamma_maximal", gamma_is_maximal(cf, values, gamma), f"constraints still feasible at gamma + {MAXIMALITY_STEP:g}")
    return report
