"""Characteristic function of the manufacturers' game.

The value of a coalition is the optimal planning profit when only its members
may produce, shortage cost included for every unit they cannot serve.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpp_planner import ProductionPlan, solve_cpp
from .model import MAX_MANUFACTURERS, Instance


class CoalitionLimitError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CharacteristicFunction:
    """Coalition values indexed by bitmask.

    ``values[0]`` holds the all-shortage profit ``-sum_i OQ_i * SC_i``; it is
    kept for reference only and never enters the allocation constraints.
    ``grand_plan`` is absent for hand-built games.
    """

    values: np.ndarray
    grand_plan: ProductionPlan | None = None

    def __post_init__(self):
        values = np.array(self.values)
        if values.dtype.kind in "iub":
            values = values.astype(np.int64)
        else:
            values = values.astype(float)
        size = values.shape[0] if values.ndim == 1 else 0
        if size < 2 or size & (size - 1):
            raise ValueError("values must have length 2**N with N >= 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0].bit_length() - 1

    @property
    def full_mask(self) -> int:
        return self.values.shape[0] - 1

    @property
    def grand_value(self):
        return self.values[-1].item()

    def __getitem__(self, mask: int):
        return self.values[int(mask)].item()

    @classmethod
    def from_dict(cls, n: int, values: dict, empty_value=0) -> "CharacteristicFunction":
        """Build a game from ``{coalition: value}``.

        Keys may be bitmasks or iterables of 0-based manufacturer indices.
        Every nonempty coalition must be present.
        """
        table = [None] * (1 << n)
        table[0] = empty_value
        for key, value in values.items():
            mask = key if isinstance(key, int) else sum(1 << m for m in key)
            table[mask] = value
        missing = [m for m, v in enumerate(table) if v is None]
        if missing:
            raise ValueError(f"missing coalition values for masks {missing}")
        return cls(np.array(table))

    def to_dict(self) -> dict:
        return {"n": self.n, "values": self.values.tolist()}


def compute_characteristic(inst: Instance) -> CharacteristicFunction:
    """Solve the planning model for every nonempty coalition."""
    N = inst.manufacturer_count
    if N > MAX_MANUFACTURERS:
        raise CoalitionLimitError(f"{N} manufacturers exceed the limit of {MAX_MANUFACTURERS}")
    values = np.empty(1 << N, dtype=np.int64)
    values[0] = -int((inst.order_quantity * inst.shortage_cost).sum())
    for mask in range(1, 1 << N):
        values[mask] = solve_cpp(inst, mask).total_profit
    grand = solve_cpp(inst, (1 << N) - 1)
    return CharacteristicFunction(values, grand)


@dataclass(frozen=True)
class SuperadditivityViolation:
    """A disjoint pair with ``v(A) + v(B) > v(A | B)``.

    ``net`` tells whether the pair still violates once the all-shortage
    baseline, counted in both ``v(A)`` and ``v(B)``, is removed once:
    ``v(A) + v(B) - v(empty) > v(A | B)``.
    """

    a: int
    b: int
    combined: float
    union_value: float
    net: bool


def superadditivity_report(cf: CharacteristicFunction) -> list[SuperadditivityViolation]:
    """List every unordered disjoint pair of nonempty coalitions that fails raw superadditivity.

    Coalition values all carry the shortage cost of unserved demand, so raw
    failures are expected and informational.  The scan is over ``3**N`` pairs.
    """
    v = cf.values.tolist()
    empty = v[0]
    out = []
    for union in range(1, cf.full_mask + 1):
        a = (union - 1) & union
        while a:
            b = union ^ a
            if a < b:
                combined = v[a] + v[b]
                if combined > v[union]:
                    out.append(
                        SuperadditivityViolation(a, b, combined, v[union], combined - empty > v[union])
                    )
            a = (a - 1) & union
    out.sort(key=lambda r: (r.a, r.b))
    return out


def coalition_sums(payoffs) -> np.ndarray:
    """``out[mask]`` is the total payoff of the manufacturers in ``mask``."""
    payoffs = np.asarray(payoffs, dtype=float)
    out = np.zeros(1 << payoffs.shape[0])
    for n, value in enumerate(payoffs):
        half = 1 << n
        out[half : 2 * half] = out[:half] + value
    return out
