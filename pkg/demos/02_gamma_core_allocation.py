# %% [markdown]
# # Sharing the profit when the core is empty
#
# Three symmetric manufacturers: alone each earns nothing, any pair earns 8,
# all three earn 10.  Pairs would demand 8 between them, which needs 12 in
# total, so no split of 10 is stable.  The allocator finds the largest
# fraction gamma of every coalition's value that can be guaranteed.

# %%
from c2m_alloc import CharacteristicFunction, allocate_game, verify_allocation

cf = CharacteristicFunction.from_dict(
    3, {(0,): 0, (1,): 0, (2,): 0, (0, 1): 8, (0, 2): 8, (1, 2): 8, (0, 1, 2): 10}
)
result = allocate_game(cf, [1, 1, 1])
print(f"gamma = {result.gamma:.6f}  (5/6 = {5 / 6:.6f})")
print("profits:", result.profits.round(6).tolist())
print("binding coalitions (bitmasks):", result.binding_coalitions)

# %% [markdown]
# Every property is rechecked by direct summation, including a certificate
# that gamma cannot be raised by 1e-4.

# %%
report = verify_allocation(None, cf, result)
for name, ok in report.checks.items():
    print(f"{name:22} {'ok' if ok else 'FAILED'}")

# %% [markdown]
# Order values rank the manufacturers.  Whoever fulfils more valuable orders
# may not earn less, even when that costs the others.

# %%
ranked = allocate_game(cf, [300, 200, 100])
print("gamma", round(ranked.gamma, 6), "profits", ranked.profits.round(4).tolist())

# %% [markdown]
# Pass ``trace=print`` to watch both linear programs and every pivot.

# %%
lines = []
allocate_game(cf, [1, 1, 1], trace=lines.append)
print("\n".join(lines[:12]))
print(f"... {len(lines)} trace lines in total")
