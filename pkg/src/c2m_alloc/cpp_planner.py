"""Centralized production planning restricted to a coalition of manufacturers.

The planning model maximizes

    sum_n sum_i q[i, n] * (SP[i] - MC[i, n]) - sum_i s[i] * SC[i]

subject to ``sum_n q[i, n] + s[i] = OQ[i]`` and ``0 <= q[i, n] <= PC[i, n] * OT[i]``
with integer ``q`` and ``s``.  It separates by product, and within a product
every unit placed with manufacturer ``n`` is worth ``SP - MC + SC`` relative to
leaving it short, so filling the cheapest capacity first is optimal.

Everything here uses Python integers; no floating point.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import Coalition, Instance, members

BRUTE_FORCE_LIMIT = 10**7


class EmptyCoalitionError(ValueError):
    pass


class SearchSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ProductionPlan:
    allocation: np.ndarray  # [product, manufacturer]
    shortage: np.ndarray  # [product]
    total_profit: int

    def __post_init__(self):
        for name in ("allocation", "shortage"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "total_profit", int(self.total_profit))

    @property
    def has_shortage(self) -> bool:
        return bool(self.shortage.sum() > 0)

    def order_values(self, ask_price) -> np.ndarray:
        """Sales value of the orders each manufacturer fulfils, ``sum_i q[i, n] * SP[i]``."""
        return (self.allocation * np.asarray(ask_price, dtype=np.int64)[:, None]).sum(axis=0)

    def to_dict(self) -> dict:
        return {
            "allocation": self.allocation.tolist(),
            "shortage": self.shortage.tolist(),
            "total_profit": self.total_profit,
        }


def _coalition_members(inst: Instance, coalition) -> list[int]:
    mask = int(coalition.__index__())
    if mask == 0:
        raise EmptyCoalitionError("coalition must contain at least one manufacturer")
    if mask >> inst.manufacturer_count:
        raise ValueError(f"coalition mask {mask:#x} exceeds {inst.manufacturer_count} manufacturers")
    return members(mask)


def plan_profit(inst: Instance, allocation, shortage) -> int:
    """Objective value of an arbitrary plan, in exact integer arithmetic."""
    q = np.asarray(allocation, dtype=np.int64)
    s = np.asarray(shortage, dtype=np.int64)
    return int((q * inst.margin).sum() - (s * inst.shortage_cost).sum())


def check_plan(inst: Instance, coalition: Coalition | int, plan: ProductionPlan) -> list[str]:
    """Return a description of each violated planning constraint (empty when feasible)."""
    errors = []
    mask = int(coalition.__index__())
    q, s = plan.allocation, plan.shortage
    if q.shape != (inst.product_count, inst.manufacturer_count) or s.shape != (inst.product_count,):
        return ["plan dimensions do not match the instance"]
    if (q < 0).any() or (s < 0).any():
        errors.append("negative quantity")
    bad = np.nonzero(q.sum(axis=1) + s != inst.order_quantity)[0]
    errors.extend(f"product {i}: allocation + shortage != order quantity" for i in bad)
    for i, n in np.argwhere(q > inst.capacity):
        errors.append(f"product {i}, manufacturer {n}: capacity exceeded")
    outside = [n for n in range(inst.manufacturer_count) if not mask >> n & 1]
    if outside and q[:, outside].any():
        errors.append("units allocated outside the coalition")
    if plan.total_profit != plan_profit(inst, q, s):
        errors.append("total_profit does not match the objective")
    return errors


def solve_cpp(inst: Instance, coalition: Coalition | int) -> ProductionPlan:
    """Optimal integer production plan using only the coalition's manufacturers.

    Per product, manufacturers are taken in order of decreasing unit margin
    (ties by index) and filled to capacity while ``margin > -SC``; whatever
    is left over is shortage.
    """
    team = _coalition_members(inst, coalition)
    I, N = inst.product_count, inst.manufacturer_count
    q = [[0] * N for _ in range(I)]
    s = [0] * I
    profit = 0
    cap = inst.capacity.tolist()
    mc = inst.manufacturing_cost.tolist()
    for i in range(I):
        sp, sc = int(inst.ask_price[i]), int(inst.shortage_cost[i])
        remaining = int(inst.order_quantity[i])
        for n in sorted(team, key=lambda n: (mc[i][n], n)):
            margin = sp - mc[i][n]
            if remaining == 0 or margin <= -sc:
                break
            units = min(cap[i][n], remaining)
            q[i][n] = units
            remaining -= units
            profit += units * margin
        s[i] = remaining
        profit -= remaining * sc
    return ProductionPlan(q, s, profit)


def brute_force_cpp(inst: Instance, coalition: Coalition | int, limit: int = BRUTE_FORCE_LIMIT) -> ProductionPlan:
    """Exhaustive reference solver.

    Every integer vector ``0 <= q[i, n] <= min(cap, OQ)`` with ``sum_n q[i, n] <= OQ[i]``
    is scored directly against the objective; the shortage is whatever is
    left.  Products do not share any constraint, so each is enumerated on its
    own and the best choices are combined.
    """
    team = _coalition_members(inst, coalition)
    I, N = inst.product_count, inst.manufacturer_count
    cap = inst.capacity
    bounds = [[min(int(cap[i, n]), int(inst.order_quantity[i])) for n in team] for i in range(I)]
    size = math.prod(b + 1 for row in bounds for b in row)
    if size > limit:
        raise SearchSpaceTooLarge(f"{size} candidate allocations exceed the limit of {limit}")

    q = np.zeros((I, N), dtype=np.int64)
    s = np.zeros(I, dtype=np.int64)
    for i in range(I):
        oq, sc, sp = int(inst.order_quantity[i]), int(inst.shortage_cost[i]), int(inst.ask_price[i])
        best = None
        for units in itertools.product(*(range(b + 1) for b in bounds[i])):
            filled = sum(units)
            if filled > oq:
                continue
            value = sum(u * (sp - int(inst.manufacturing_cost[i, n])) for u, n in zip(units, team))
            value -= (oq - filled) * sc
            if best is None or value > best[0]:
                best = (value, units)
        for u, n in zip(best[1], team):
            q[i, n] = u
        s[i] = oq - sum(best[1])
    return ProductionPlan(q, s, plan_profit(inst, q, s))
