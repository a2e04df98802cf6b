"""Offline allocation algorithms with provable approximation guarantees."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InfeasibleTrace, InvalidParams, NoPositiveBids, NotANonMatchingEdge
from .model import (
    SKIP,
    Action,
    Assign,
    AuctionTrace,
    BudgetState,
    Instance,
    TraceStep,
    execute,
    r_min,
)
from .oracles import Matching, max_matching


def top_c(instance: Instance, c: int) -> AuctionTrace:
    """Allocate the c keywords with the highest second-highest bid.

    Each chosen keyword goes to its two highest original bidders (ties:
    lowest arrival index among keywords, lowest bidder index within a
    keyword).  When every bidder's budget covers c of its own bids, no
    truncation occurs and the value is at least (c/m) of the sum of
    second-highest bids; otherwise a warning is issued and the pair is
    oriented by current effective bids so the trace stays legal.
    """
    if c < 1:
        raise InvalidParams(f"c must be >= 1, got {c}")
    try:
        if r_min(instance) < c:
            warnings.warn(
                f"r_min below {c}: the no-truncation guarantee does not apply",
                stacklevel=2,
            )
    except NoPositiveBids:
        pass

    ranked: list[tuple[int, int, str, tuple[str, ...]]] = []
    for idx, u in enumerate(instance.keywords):
        row = instance.positive_bids(u)
        top2 = sorted(row, key=lambda v: (-row[v], instance.bidder_index(v)))[:2]
        s_u = row[top2[1]] if len(top2) >= 2 else 0
        ranked.append((s_u, idx, u, tuple(top2)))
    chosen = {
        u: top2
        for _, _, u, top2 in sorted(ranked, key=lambda r: (-r[0], r[1]))[:c]
        if top2
    }

    state = BudgetState.start(instance)
    steps = []
    for u in instance.keywords:
        action: Action = SKIP
        if u in chosen:
            pair = chosen[u]
            first = pair[0]
            if len(pair) >= 2:
                second = pair[1]
            else:
                others = [v for v in instance.bidder_ids if v != first]
                second = others[0] if others else None
            if second is not None:
                row = instance.positive_bids(u)
                if state.effective(first, row.get(first, 0)) < state.effective(
                    second, row.get(second, 0)
                ):
                    first, second = second, first
                action = Assign(first, second)
        steps.append(TraceStep(u, action, state.settle(instance.positive_bids(u), action)))
    return AuctionTrace(tuple(steps), sum(s.price for s in steps), dict(state.remaining))


class EdgeKind(Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class EdgeClass:
    keyword: str
    bidder: str
    kind: EdgeKind


def classify_edge(instance: Instance, f: Matching, edge: tuple[str, str]) -> EdgeClass:
    """Classify a non-matching positive-bid edge (u, v) relative to matching f.

    UP: v is matched by f and its partner arrives before u.  DOWN: v is
    unmatched, or its partner arrives at or after u.
    """
    u, v = edge
    if instance.bid(u, v) <= 0 or f.bidder_of(u) == v:
        raise NotANonMatchingEdge(f"({u!r}, {v!r}) is not a positive edge outside f")
    arrival = {kw: i for i, kw in enumerate(instance.keywords)}
    partner = f.keyword_of(v)
    if partner is not None and arrival[partner] < arrival[u]:
        return EdgeClass(u, v, EdgeKind.UP)
    return EdgeClass(u, v, EdgeKind.DOWN)


def reverse_match(instance: Instance) -> AuctionTrace:
    """2-approximation for all-ones instances via a maximum matching.

    Finds a maximum matching f, then walks the matched keywords in reverse
    arrival order.  A keyword with a down-edge (u, v) is assigned to f(u)
    with v as second; otherwise every other neighbor is matched to an
    earlier keyword, so one such edge (u, v) is chosen (the one whose
    partner arrives earliest, then lowest bidder index), the partner's
    matching edge is removed, and u is assigned to f(u) with v as second.
    Every assignment charges exactly 1, so the value is at least half the
    matching size, rounded up.
    """
    if not instance.is_unit():
        raise InvalidParams("reverse_match needs an all-ones instance")

    arrival = {u: i for i, u in enumerate(instance.keywords)}
    nbrs = {u: instance.neighbors(u) for u in instance.keywords}
    thin = [u for u in instance.keywords if len(nbrs[u]) < 2]
    if thin:
        warnings.warn(
            f"dropping {len(thin)} keyword(s) with fewer than two bidders",
            stacklevel=2,
        )
        kept = tuple(u for u in instance.keywords if len(nbrs[u]) >= 2)
        filtered = Instance(
            kept,
            instance.bidders,
            {(u, v): a for (u, v), a in instance.bids.items() if u in set(kept)},
        )
    else:
        filtered = instance

    f = dict(max_matching(filtered).pairs)
    f_inv = {v: u for u, v in f.items()}
    bidx = instance.bidder_index

    assignments: dict[str, Assign] = {}
    for u in sorted(f, key=lambda u: -arrival[u]):
        if u not in f:
            continue
        mate = f[u]
        others = [v for v in nbrs[u] if v != mate]
        down = [
            v
            for v in others
            if v not in f_inv or arrival[f_inv[v]] > arrival[u]
        ]
        if down:
            second = min(down, key=bidx)
        else:
            second = min(others, key=lambda v: (arrival[f_inv[v]], bidx(v)))
            removed = f_inv.pop(second)
            del f[removed]
        assignments[u] = Assign(mate, second)

    actions: list[Action] = [assignments.get(u, SKIP) for u in instance.keywords]
    trace = execute(instance, actions)
    for step in trace.steps:
        if isinstance(step.action, Assign) and step.price != 1:
            raise InfeasibleTrace(
                f"assignment of {step.keyword!r} charged {step.price}, expected 1"
            )
    return trace


def top_c_bound(instance: Instance, c: int) -> Fraction:
    """The guaranteed value (c/m) * sum of second-highest bids, as a rational."""
    from .oracles import second_bid_upper_bound

    if instance.m == 0:
        return Fraction(0)
    return Fraction(min(c, instance.m), instance.m) * second_bid_upper_bound(instance)
