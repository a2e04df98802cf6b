"""Walk through the auction semantics: effective bids, assignments, traces.

An instance is a sequence of keywords, a set of budgeted bidders, and a
sparse integer bid matrix.  Keywords arrive in order; for each one the
auctioneer either skips or assigns a (first, second) bidder pair.  The
winner pays the runner-up's effective bid, where effective means
truncated at the bidder's remaining budget.
"""

from auctionlab import (
    SKIP,
    Assign,
    Instance,
    effective_bid,
    execute,
    r_min,
    unit_instance,
    validate,
)

# Effective bids never exceed the remaining budget.
print("effective_bid(6, 3) =", effective_bid(6, 3))
print("effective_bid(2, 3) =", effective_bid(2, 3))

# Two keywords, two bidders. A outbids B on both, but budgets bind.
inst = Instance(
    keywords=("morning", "evening"),
    bidders=(("A", 4), ("B", 3)),
    bids={
        ("morning", "A"): 4,
        ("morning", "B"): 3,
        ("evening", "A"): 2,
        ("evening", "B"): 1,
    },
)

report = validate(inst)
print("\nvalidate ok:", report.ok, "warnings:", report.warnings)
print("r_min:", r_min(inst))

# Assign A over B twice. The second assignment reprices because the
# first one drained most of A's budget.
trace = execute(inst, [Assign("A", "B"), Assign("A", "B")])
for step in trace.steps:
    print(f"  {step.keyword}: {step.action} -> price {step.price}")
print("auctioneer revenue:", trace.value)
print("final budgets:", trace.final_budgets)

# Skipping is always legal; assignments must respect the effective-bid
# ordering, so selling "evening" to B over A would raise.
lazy = execute(inst, [SKIP, Assign("A", "B")])
print("\nskip first, sell second:", lazy.prices(), "value", lazy.value)

# 0/1 instances (every bid and budget is 1) model plain matching with
# second-price profits: an assignment earns 1 exactly when the runner-up
# is a distinct unspent neighbor.
unit = unit_instance({"u1": ["v1", "v2"], "u2": ["v2"]})
pair = execute(unit, [Assign("v1", "v2"), SKIP])
print("\nunit instance:", pair.prices(), "value", pair.value)
