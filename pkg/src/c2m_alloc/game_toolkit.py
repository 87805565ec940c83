"""Shapley value, core membership and a side-by-side comparison of mechanisms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coalition_values import CharacteristicFunction, coalition_sums, compute_characteristic
from .core_allocator import AllocationInfeasible, AllocationResult, allocate
from .model import MAX_MANUFACTURERS, Instance

CORE_TOL = 1e-6
# recorded in every comparison so readers know which Shapley variant they see
EMPTY_COALITION_CONVENTION = "v(empty) = 0"


class GameSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ShapleyVector:
    values: np.ndarray

    def to_dict(self) -> dict:
        return {"values": [float(v) for v in self.values], "empty_coalition": EMPTY_COALITION_CONVENTION}


def _popcounts(size: int) -> np.ndarray:
    masks = np.arange(size)
    counts = np.zeros(size, dtype=np.int64)
    for bit in range(size.bit_length()):
        counts += (masks >> bit) & 1
    return counts


def shapley(cf: CharacteristicFunction) -> ShapleyVector:
    """Exact Shapley value by weighted marginal contributions over all coalitions.

    The empty coalition is worth 0 here, not the all-shortage profit stored in
    ``cf.values[0]``, so the first manufacturer to join is credited with the
    shortage it relieves and the values sum to ``v(N)``.
    """
    N = cf.n
    if N > MAX_MANUFACTURERS:
        raise GameSizeError(f"{N} players exceed the limit of {MAX_MANUFACTURERS}")
    v = cf.values.astype(float).copy()
    v[0] = 0.0
    size = 1 << N
    masks = np.arange(size)
    counts = _popcounts(size)
    weight = np.array([math.factorial(s) * math.factorial(N - s - 1) for s in range(N)], dtype=float)
    weight /= math.factorial(N)
    out = np.zeros(N)
    for n in range(N):
        without = masks[(masks >> n & 1) == 0]
        gain = v[without | (1 << n)] - v[without]
        out[n] = float(np.dot(weight[counts[without]], gain))
    return ShapleyVector(out)


@dataclass(frozen=True)
class CoreCheck:
    in_core: bool
    worst_coalition: int
    worst_deficit: float  # max over coalitions of v(S) - sum_{n in S} p_n
    budget_gap: float  # sum(p) - v(N)


def core_membership(cf: CharacteristicFunction, profits) -> CoreCheck:
    """Scan every nonempty coalition for the largest shortfall ``v(S) - p(S)``."""
    p = np.asarray(profits, dtype=float)
    if p.shape != (cf.n,):
        raise ValueError(f"expected {cf.n} profits, got shape {p.shape}")
    excess = coalition_sums(p)[1:] - cf.values[1:].astype(float)
    k = int(np.argmin(excess))
    gap = float(p.sum() - cf.grand_value)
    deficit = float(-excess[k])
    return CoreCheck(
        in_core=bool(deficit <= CORE_TOL and abs(gap) <= CORE_TOL),
        worst_coalition=k + 1,
        worst_deficit=deficit,
        budget_gap=gap,
    )


@dataclass(frozen=True, eq=False)
class Comparison:
    grand_value: float
    allocation: AllocationResult | None
    allocation_core: CoreCheck | None
    shapley: ShapleyVector
    shapley_core: CoreCheck
    note: str = ""

    def to_dict(self) -> dict:
        def core(c: CoreCheck | None):
            if c is None:
                return None
            return {
                "in_core": c.in_core,
                "worst_coalition": c.worst_coalition,
                "worst_deficit": c.worst_deficit,
                "budget_gap": c.budget_gap,
            }

        return {
            "grand_value": self.grand_value,
            "empty_coalition": EMPTY_COALITION_CONVENTION,
            "gamma_core": None if self.allocation is None else {**self.allocation.to_dict(), "core": core(self.allocation_core)},
            "shapley": {"profits": [float(v) for v in self.shapley.values], "core": core(self.shapley_core)},
            "note": self.note,
        }


def compare_game(cf: CharacteristicFunction, allocation: AllocationResult | None, note: str = "") -> Comparison:
    phi = shapley(cf)
    return Comparison(
        grand_value=float(cf.grand_value),
        allocation=allocation,
        allocation_core=None if allocation is None else core_membership(cf, allocation.profits),
        shapley=phi,
        shapley_core=core_membership(cf, phi.values),
        note=note,
    )


def compare(inst: Instance, cf: CharacteristicFunction | None = None) -> Comparison:
    """Run planning, the gamma-core allocation and the Shapley value on one instance."""
    cf = compute_characteristic(inst) if cf is None else cf
    try:
        result = allocate(inst, cf)
        note = ""
    except AllocationInfeasible as exc:
        result, note = None, str(exc)
    return compare_game(cf, result, note)
