# %% [markdown]
# # Planning production for a coalition
#
# One product is ordered 100 times at an ask price of 10.  Each unit left
# unmade costs 2.  Manufacturer 1 makes it for 4 with room for 50 units
# before the due date; manufacturer 2 makes it for 9 with room for 100.

# %%
import numpy as np

from c2m_alloc import Instance, brute_force_cpp, compute_characteristic, solve_cpp, superadditivity_report

inst = Instance(
    product_count=1,
    manufacturer_count=2,
    manufacturing_cost=np.array([[4, 9]]),
    production_capacity=np.array([[10, 20]]),  # per time unit
    shortage_cost=np.array([2]),
    ask_price=np.array([10]),
    order_quantity=np.array([100]),
    order_delivery_time=np.array([5]),
)
print("capacity before the due date:", inst.capacity.tolist())
print("unit margins:", inst.margin.tolist())

# %% [markdown]
# The planner fills the cheapest manufacturer first, then the next, and
# stops once a unit would lose more than the shortage it avoids.

# %%
plan = solve_cpp(inst, 0b11)
print("allocation", plan.allocation.tolist(), "shortage", plan.shortage.tolist(), "profit", plan.total_profit)

# the exhaustive solver agrees
assert brute_force_cpp(inst, 0b11).total_profit == plan.total_profit

# %% [markdown]
# Repeating the plan for every subset of manufacturers gives the
# characteristic function.  Shortage cost is charged in every coalition, so
# the empty coalition is worth minus the cost of missing every order.

# %%
cf = compute_characteristic(inst)
for mask, value in enumerate(cf.values):
    members = [n + 1 for n in range(cf.n) if mask >> n & 1]
    print(f"{str(members):8} {value:6d}")
print("superadditivity violations:", superadditivity_report(cf))
