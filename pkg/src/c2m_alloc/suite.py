"""Instance suites: the six default shapes, manifests and batch solving."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .coalition_values import CharacteristicFunction, compute_characteristic
from .core_allocator import AllocationInfeasible, AllocationResult, DegenerateAllocationWarning, allocate
from .cpp_planner import ProductionPlan
from .game_toolkit import Comparison, compare_game
from .model import GeneratorConfig, Instance, InstanceFormatError, generate_instance, read_instance, validate_instance, write_instance

MANIFEST = "manifest.json"

# (I, N) of instance sets 1..6
DEFAULT_SHAPES = ((1, 5), (1, 10), (5, 5), (5, 10), (10, 5), (10, 10))


class SuiteError(RuntimeError):
    pass


@dataclass(frozen=True)
class SuiteEntry:
    label: str
    product_count: int
    manufacturer_count: int
    count: int
    base_seed: int


@dataclass(frozen=True)
class SuiteSpec:
    entries: tuple[SuiteEntry, ...]

    def __post_init__(self):
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("suite labels must be unique")
        for e in self.entries:
            if e.count < 1 or e.product_count < 1 or e.manufacturer_count < 1:
                raise ValueError(f"{e.label}: counts must be positive")

    @classmethod
    def default(cls, seed: int = 0, count: int = 10) -> "SuiteSpec":
        """Six sets of ``count`` instances, one per default shape."""
        return cls(
            tuple(
                SuiteEntry(f"set{j}_{I}x{N}", I, N, count, seed * 16 + j)
                for j, (I, N) in enumerate(DEFAULT_SHAPES, start=1)
            )
        )


def instance_seed(base_seed: int, index: int) -> int:
    """64-bit seed of instance ``index`` of a set."""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1, dtype=np.uint64)[0])


def suite_instances(spec: SuiteSpec):
    """Yield ``(entry, index, seed, instance)`` in label order then index order; indices start at 1."""
    for entry in spec.entries:
        for k in range(1, entry.count + 1):
            seed = instance_seed(entry.base_seed, k)
            cfg = GeneratorConfig(seed, entry.product_count, entry.manufacturer_count)
            yield entry, k, seed, generate_instance(cfg)


def write_suite(spec: SuiteSpec, out_dir: str | Path) -> list[Path]:
    """Write ``<label>_<k>.json`` per instance plus a manifest listing every seed."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    records = []
    for entry, k, seed, inst in suite_instances(spec):
        path = out / f"{entry.label}_{k}.json"
        path.write_bytes(write_instance(inst))
        files.append(path)
        records.append(
            {
                "file": path.name,
                "label": entry.label,
                "index": k,
                "seed": seed,
                "product_count": entry.product_count,
                "manufacturer_count": entry.manufacturer_count,
            }
        )
    manifest = {
        "sets": [
            {
                "label": e.label,
                "product_count": e.product_count,
                "manufacturer_count": e.manufacturer_count,
                "count": e.count,
                "base_seed": e.base_seed,
            }
            for e in spec.entries
        ],
        "instances": records,
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n")
    return files


def read_manifest(directory: str | Path) -> dict:
    path = Path(directory) / MANIFEST
    if not path.is_file():
        raise SuiteError(f"{path}: manifest not found")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SuiteError(f"{path}: {exc}") from exc
    if not manifest.get("instances"):
        raise SuiteError(f"{path}: manifest lists no instances")
    return manifest


# --------------------------------------------------------------------------- #
# solving
# --------------------------------------------------------------------------- #

OK, DEGENERATE, INFEASIBLE = "ok", "degenerate", "infeasible"


@dataclass(eq=False)
class InstanceOutcome:
    """Everything computed for one instance."""

    label: str
    index: int
    instance: Instance
    cf: CharacteristicFunction
    allocation: AllocationResult | None
    comparison: Comparison
    status: str
    message: str = ""
    scale_oq: float = 1.0

    @property
    def plan(self) -> ProductionPlan:
        return self.cf.grand_plan

    @property
    def total_profit(self) -> int:
        return self.plan.total_profit

    @property
    def shortage(self) -> bool:
        return self.plan.has_shortage

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "index": self.index,
            "scale_oq": self.scale_oq,
            "status": self.status,
            "message": self.message,
            "total_profit": self.total_profit,
            "gamma": None if self.allocation is None else float(self.allocation.gamma),
            "shortage": self.shortage,
            "plan": self.plan.to_dict(),
            "characteristic_function": self.cf.to_dict(),
            "allocation": None if self.allocation is None else self.allocation.to_dict(),
            "comparison": self.comparison.to_dict(),
        }


def solve_instance(
    inst: Instance,
    label: str = "",
    index: int = 1,
    scale_oq: float = 1.0,
    trace: Callable[[str], None] | None = None,
) -> InstanceOutcome:
    """Plan, compute coalition values, allocate and compare for one instance."""
    problems = validate_instance(inst)
    if problems:
        raise ValueError("invalid instance: " + "; ".join(map(str, problems)))
    if scale_oq != 1.0:
        inst = inst.with_scaled_orders(scale_oq)
    cf = compute_characteristic(inst)
    message = ""
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DegenerateAllocationWarning)
            result = allocate(inst, cf, trace=trace)
        status = DEGENERATE if result.degenerate else OK
        message = "; ".join(str(w.message) for w in caught)
    except AllocationInfeasible as exc:
        result, status, message = None, INFEASIBLE, str(exc)
    return InstanceOutcome(
        label=label,
        index=index,
        instance=inst,
        cf=cf,
        allocation=result,
        comparison=compare_game(cf, result, message),
        status=status,
        message=message,
        scale_oq=scale_oq,
    )


def solve_suite(directory: str | Path, scale_oq: float = 1.0) -> list[InstanceOutcome]:
    """Solve every instance named in the directory's manifest, in label then index order."""
    directory = Path(directory)
    manifest = read_manifest(directory)
    order = {s["label"]: j for j, s in enumerate(manifest.get("sets", []))}
    records = sorted(manifest["instances"], key=lambda r: (order.get(r["label"], len(order)), r["label"], r["index"]))
    outcomes = []
    for rec in records:
        path = directory / rec["file"]
        try:
            inst = read_instance(path.read_bytes())
        except OSError as exc:
            raise SuiteError(f"{path}: {exc.strerror or exc}") from exc
        except InstanceFormatError as exc:
            raise SuiteError(f"{path}: {exc}") from exc
        outcomes.append(solve_instance(inst, rec["label"], rec["index"], scale_oq))
    return outcomes


def solve_spec(spec: SuiteSpec, scale_oq: float = 1.0) -> list[InstanceOutcome]:
    """Generate and solve a suite in memory, without touching the filesystem."""
    return [solve_instance(inst, e.label, k, scale_oq) for e, k, _, inst in suite_instances(spec)]


@dataclass
class SetSummary:
    label: str
    instances: int
    mean_profit: float
    in_core: int
    shortage: int
    infeasible: int
    degenerate: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def summarize(outcomes: Sequence[InstanceOutcome]) -> list[SetSummary]:
    groups: dict[str, list[InstanceOutcome]] = {}
    for o in outcomes:
        groups.setdefault(o.label, []).append(o)
    out = []
    for label, rows in groups.items():
        out.append(
            SetSummary(
                label=label,
                instances=len(rows),
                mean_profit=float(np.mean([r.total_profit for r in rows])),
                in_core=sum(r.allocation is not None and r.allocation.in_core for r in rows),
                shortage=sum(r.shortage for r in rows),
                infeasible=sum(r.status == INFEASIBLE for r in rows),
                degenerate=sum(r.status == DEGENERATE for r in rows),
            )
        )
    return out
