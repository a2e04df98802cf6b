"""Offline approximations against exact search.

top_c sells the c keywords with the largest runner-up bids and is within
a factor m/c of optimal when every keyword has at least c positive bids.
reverse_match walks a maximum matching in reverse arrival order and
keeps at least half of it as paying second-price assignments.
"""

from auctionlab import (
    Instance,
    max_matching,
    opt_2paa,
    opt_2pm,
    random_2pm,
    reverse_match,
    top_c,
    top_c_bound,
    unit_instance,
)

# Three keywords whose runner-up ("second") bids are 3, 5, 2.
inst = Instance(
    keywords=("k1", "k2", "k3"),
    bidders=(("A", 100), ("B", 100)),
    bids={
        ("k1", "A"): 6, ("k1", "B"): 3,
        ("k2", "A"): 7, ("k2", "B"): 5,
        ("k3", "A"): 4, ("k3", "B"): 2,
    },
)

for c in (1, 2, 3):
    trace = top_c(inst, c)
    print(
        f"top_c(c={c}): value {trace.value}"
        f"  (guarantee >= {top_c_bound(inst, c)}, opt {opt_2paa(inst).value})"
    )

# A 6-cycle: the maximum matching saturates all three keywords, but
# second-price profits cannot collect on every edge.
cycle = unit_instance({"u1": ["v1", "v2"], "u2": ["v2", "v3"], "u3": ["v3", "v1"]})
f = max_matching(cycle)
rm = reverse_match(cycle)
best = opt_2pm(cycle)
print("\n6-cycle: |f| =", f.size, " reverse_match =", rm.value, " opt =", best.value)

# Sometimes half is all you get: two keywords sharing both neighbors.
diamond = unit_instance({"u1": ["v1", "v2"], "u2": ["v1", "v2"]})
rm = reverse_match(diamond)
print("diamond: actions", rm.actions(), "-> value", rm.value,
      "(opt", opt_2pm(diamond).value, ")")

# The factor-2 guarantee on random instances.
worst = 0.0
for seed in range(200):
    g = random_2pm(7, 7, 0.3, seed=seed)
    value = reverse_match(g).value
    opt = opt_2pm(g).value
    if value:
        worst = max(worst, opt / value)
print(f"\n200 random instances: worst opt/value ratio {worst:.3f} (bound 2)")
