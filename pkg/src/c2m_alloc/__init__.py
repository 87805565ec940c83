"""Production planning and gamma-approximate core profit allocation for a C2M alliance."""
from .coalition_values import CharacteristicFunction, compute_characteristic, superadditivity_report
from .core_allocator import AllocationInfeasible, AllocationResult, DegenerateAllocationWarning, allocate, allocate_game, verify_allocation
from .cpp_planner import ProductionPlan, brute_force_cpp, solve_cpp
from .game_toolkit import compare, core_membership, shapley
from .model import (
    Coalition,
    GeneratorConfig,
    Instance,
    generate_instance,
    read_instance,
    validate_instance,
    write_instance,
)
from .simplex_lp import LinearProgram, LpSolution, solve_lp
from .suite import SuiteSpec, solve_spec, summarize

__version__ = "0.1.0"

__all__ = [
    "AllocationInfeasible",
    "AllocationResult",
    "CharacteristicFunction",
    "Coalition",
    "DegenerateAllocationWarning",
    "GeneratorConfig",
    "Instance",
    "LinearProgram",
    "LpSolution",
    "ProductionPlan",
    "SuiteSpec",
    "allocate",
    "allocate_game",
    "brute_force_cpp",
    "compare",
    "compute_characteristic",
    "core_membership",
    "generate_instance",
    "read_instance",
    "shapley",
    "solve_cpp",
    "solve_lp",
    "solve_spec",
    "summarize",
    "superadditivity_report",
    "validate_instance",
    "verify_allocation",
    "write_instance",
]
