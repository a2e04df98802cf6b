"""Reduction gadgets and the first-price transform.

partition_to_2paa embeds an equal-sum partition question into a budgeted
auction whose optimum crosses a stated threshold exactly on yes-instances.
vc_to_2pm embeds vertex cover into an all-ones instance with the identity
OPT = 2|V| + |E| - OPT_VC, and extract_vertex_cover recovers a cover from
any feasible trace.  to_first_price_bids / random_construction relate
second-price optima to first-price optima within a factor of 8 in
expectation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    InfeasibleTrace,
    InvalidParams,
    NotAPartition,
    UnresolvableSecondBidder,
)
from .model import (
    SKIP,
    Action,
    Assign,
    AuctionTrace,
    BudgetState,
    Instance,
    execute,
)

# ----------------------------------------------------------------------
# equal-sum partition -> budgeted second-price auction


@dataclass(frozen=True)
class PartitionGadget:
    """Auction encoding of an equal-sum partition question.

    `weights` and `total_weight` are post-scaling (everything is doubled
    once when the raw weight sum is odd, recorded in `scale`).
    """

    instance: Instance
    n: int
    c: int
    weights: tuple[int, ...]
    total_weight: int
    scale: int
    c_keywords: tuple[str, ...]
    e_keywords: tuple[str, str]
    g_keywords: tuple[tuple[str, ...], ...]  # indexed [i][k], i in 1..n^2
    bidder_a: str
    bidder_d: tuple[str, str]
    bidder_f: str
    bidders_h: tuple[str, ...]

    @property
    def yes_value(self) -> int:
        """Value achievable exactly when an equal partition exists."""
        n, c, w = self.n, self.c, self.total_weight
        return c * w * (n**5 + n + 2)

    @property
    def no_threshold(self) -> int:
        """Every solution stays strictly below this on no-instances."""
        n, c, w = self.n, self.c, self.total_weight
        return c * w * (n**3 + c * n * n + n + 2)

    @property
    def d_checkpoint(self) -> int:
        """Remaining budget of d1/d2 after the c-phase of the yes strategy."""
        return self.c * self.total_weight // 2

    @property
    def f_checkpoint(self) -> int:
        """Remaining budget of f after the e-phase of the yes strategy."""
        return self.c * self.total_weight * self.n**3


def partition_to_2paa(weights: Sequence[int], c: int) -> PartitionGadget:
    """Build the auction gadget for an even-size positive-weight multiset."""
    ws = list(weights)
    n = len(ws)
    if n == 0 or n % 2 != 0:
        raise InvalidParams(f"need an even positive number of weights, got {n}")
    if c < 1:
        raise InvalidParams(f"c must be >= 1, got {c}")
    for w in ws:
        if isinstance(w, bool) or not isinstance(w, int) or w <= 0:
            raise InvalidParams(f"weights must be positive ints, got {w!r}")
    scale = 2 if sum(ws) % 2 else 1
    ws = [w * scale for w in ws]
    W = sum(ws)

    c_keywords = tuple(f"c{i}" for i in range(1, n + 1))
    e_keywords = ("e1", "e2")
    g_keywords = tuple(
        tuple(f"g{i}.{k}" for k in range(1, c + 1)) for i in range(1, n * n + 1)
    )
    keywords = c_keywords + e_keywords + tuple(g for row in g_keywords for g in row)

    bidders_h = tuple(f"h{i}" for i in range(1, n * n + 1))
    side_budget = c * W * (n + 2) // 2  # c*W*(1 + n/2); n is even
    bidders = (
        ("a", side_budget),
        ("d1", side_budget),
        ("d2", side_budget),
        ("f", c * W * (n**3 + 1)),
    ) + tuple((h, c * W * n**3) for h in bidders_h)

    bids: dict[tuple[str, str], int] = {}
    for i, kw in enumerate(c_keywords):
        for v in ("a", "d1", "d2"):
            bids[(kw, v)] = c * (ws[i] + W)
    for j, kw in enumerate(e_keywords):
        bids[(kw, f"d{j + 1}")] = c * W
        bids[(kw, "f")] = c * W // 2
    for i, row in enumerate(g_keywords):
        for kw in row:
            bids[(kw, "f")] = W * (n**3 + 1)
            bids[(kw, bidders_h[i])] = W * n**3

    instance = Instance(keywords, bidders, bids)
    return PartitionGadget(
        instance,
        n,
        c,
        tuple(ws),
        W,
        scale,
        c_keywords,
        e_keywords,
        g_keywords,
        "a",
        ("d1", "d2"),
        "f",
        bidders_h,
    )


def yes_strategy(gadget: PartitionGadget, subset: Iterable[int]) -> AuctionTrace:
    """Replay the canonical strategy certified by an equal-sum half `subset`.

    `subset` holds 1-based weight indices; it must have size n/2 and carry
    exactly half the total weight, else NotAPartition.  The replayed value
    always equals `gadget.yes_value`.
    """
    picked = set(subset)
    if not picked <= set(range(1, gadget.n + 1)):
        raise InvalidParams(f"subset indices must lie in 1..{gadget.n}")
    if len(picked) != gadget.n // 2 or (
        sum(gadget.weights[i - 1] for i in picked) * 2 != gadget.total_weight
    ):
        raise NotAPartition(
            f"indices {sorted(picked)} do not carry half of {gadget.total_weight}"
        )

    actions: list[Action] = []
    for i in range(1, gadget.n + 1):
        actions.append(Assign("d1" if i in picked else "d2", "a"))
    actions.append(Assign("f", "d1"))
    actions.append(Assign("f", "d2"))
    for i, row in enumerate(gadget.g_keywords):
        if i == 0:
            for kw in row[:-1]:
                actions.append(Assign("f", gadget.bidders_h[0]))
            actions.append(Assign(gadget.bidders_h[0], "f"))
        else:
            for kw in row:
                actions.append(Assign(gadget.bidders_h[i], "f"))
    trace = execute(gadget.instance, actions)
    assert trace.value == gadget.yes_value, "canonical replay missed its target"
    return trace


# ----------------------------------------------------------------------
# vertex cover -> all-ones second-price matching


@dataclass(frozen=True)
class VcGadget:
    """All-ones instance whose optimum is 2|V| + |E| - OPT_VC."""

    instance: Instance
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    h_keywords: Mapping[str, str]
    l_keywords: Mapping[str, str]
    edge_keywords: Mapping[tuple[str, str], str]
    x_bidders: Mapping[tuple[str, str], str]
    y_bidders: Mapping[str, str]
    z_bidders: Mapping[str, str]

    def identity_value(self, opt_vertex_cover: int) -> int:
        return 2 * len(self.vertices) + len(self.edges) - opt_vertex_cover


def vc_to_2pm(vertices: Sequence[str], edges: Sequence[tuple[str, str]]) -> VcGadget:
    """Embed a simple graph; all vertex gadgets arrive before edge keywords."""
    verts = tuple(str(v) for v in vertices)
    if len(set(verts)) != len(verts):
        raise InvalidParams("duplicate vertex labels")
    vset = set(verts)
    seen: set[frozenset[str]] = set()
    norm_edges: list[tuple[str, str]] = []
    for s, t in edges:
        s, t = str(s), str(t)
        if s == t:
            raise InvalidParams(f"self-loop at {s!r}")
        if s not in vset or t not in vset:
            raise InvalidParams(f"edge ({s!r}, {t!r}) references unknown vertex")
        key = frozenset((s, t))
        if key in seen:
            raise InvalidParams(f"duplicate edge ({s!r}, {t!r})")
        seen.add(key)
        norm_edges.append((s, t))

    h_kw = {v: f"h:{v}" for v in verts}
    l_kw = {v: f"l:{v}" for v in verts}
    e_kw = {e: f"e:{e[0]}-{e[1]}" for e in norm_edges}
    x_b = {e: f"x:{e[0]}-{e[1]}" for e in norm_edges}
    y_b = {v: f"y:{v}" for v in verts}
    z_b = {v: f"z:{v}" for v in verts}

    keywords = tuple(kw for v in verts for kw in (h_kw[v], l_kw[v])) + tuple(
        e_kw[e] for e in norm_edges
    )
    bidder_ids = (
        verts
        + tuple(b for v in verts for b in (y_b[v], z_b[v]))
        + tuple(x_b[e] for e in norm_edges)
    )
    bids: dict[tuple[str, str], int] = {}
    for v in verts:
        bids[(h_kw[v], v)] = 1
        bids[(h_kw[v], y_b[v])] = 1
        bids[(l_kw[v], y_b[v])] = 1
        bids[(l_kw[v], z_b[v])] = 1
    for e in norm_edges:
        s, t = e
        bids[(e_kw[e], s)] = 1
        bids[(e_kw[e], t)] = 1
        bids[(e_kw[e], x_b[e])] = 1

    instance = Instance(keywords, tuple((b, 1) for b in bidder_ids), bids)
    return VcGadget(instance, verts, tuple(norm_edges), h_kw, l_kw, e_kw, x_b, y_b, z_b)


def extract_vertex_cover(gadget: VcGadget, trace: AuctionTrace) -> frozenset[str]:
    """Recover a vertex cover of size 2|V| + |E| - value from a feasible trace.

    The trace is first normalized (without decreasing value) so that every
    edge keyword is allocated to its private bidder for profit 1 and every
    vertex gadget is in canonical shape; the cover is the set of vertices
    whose vertex bidder ends up with no keyword.
    """
    instance = gadget.instance
    replay = execute(instance, trace.actions())
    if replay.prices() != trace.prices():
        raise InfeasibleTrace("trace does not replay on the gadget instance")

    vertex_bidders = set(gadget.vertices)
    alloc: dict[str, str] = {
        s.keyword: s.action.first
        for s in replay.steps
        if isinstance(s.action, Assign) and s.price == 1
    }

    # edge keywords never go to vertex bidders; switching to the private
    # bidder keeps the profit and frees the vertex
    for e in gadget.edges:
        kw = gadget.edge_keywords[e]
        if alloc.get(kw) in vertex_bidders:
            alloc[kw] = gadget.x_bidders[e]

    def consumed(v: str) -> bool:
        return alloc.get(gadget.h_keywords[v]) == v

    def free_vertex(v: str) -> None:
        # h:v currently consumes v; shift it to y:v, which costs at most
        # the l:v allocation
        alloc[gadget.h_keywords[v]] = gadget.y_bidders[v]
        alloc.pop(gadget.l_keywords[v], None)

    for e in gadget.edges:
        kw = gadget.edge_keywords[e]
        if kw in alloc:
            continue
        s, t = e
        if consumed(s) and consumed(t):
            free_vertex(s)
        alloc[kw] = gadget.x_bidders[e]

    for v in gadget.vertices:
        if consumed(v):
            alloc.setdefault(gadget.l_keywords[v], gadget.y_bidders[v])
        elif alloc.get(gadget.h_keywords[v]) != gadget.y_bidders[v]:
            alloc.pop(gadget.l_keywords[v], None)
            alloc[gadget.h_keywords[v]] = gadget.y_bidders[v]

    # rebuild canonically and let the exact semantics verify every step
    state = BudgetState.start(instance)
    value = 0
    for kw in instance.keywords:
        first = alloc.get(kw)
        if first is None:
            state.settle({}, SKIP)
            continue
        row = instance.positive_bids(kw)
        second = next(
            (v for v in row if v != first and state.remaining[v] >= 1), None
        )
        assert second is not None, f"normalization left {kw!r} without a second"
        price = state.settle(row, Assign(first, second))
        assert price == 1
        value += price

    assert value >= trace.value, "normalization lost value"
    cover = frozenset(v for v in gadget.vertices if not consumed(v))
    assert all(s in cover or t in cover for s, t in gadget.edges)
    assert len(cover) == 2 * len(gadget.vertices) + len(gadget.edges) - value
    return cover


# ----------------------------------------------------------------------
# second-price -> first-price transform and the random construction


def to_first_price_bids(instance: Instance) -> Instance:
    """Replace each bid with the highest other bid on the keyword not above it.

    The transformed bid b'(u, v) is what v would pay as a winner under
    second-price rules with everyone solvent; an empty candidate set gives 0.
    Budgets are unchanged, so b' <= b <= budget still holds.
    """
    bids: dict[tuple[str, str], int] = {}
    ids = instance.bidder_ids
    for u in instance.keywords:
        amounts = [instance.bids.get((u, v), 0) for v in ids]
        for i, v in enumerate(ids):
            below = [a for j, a in enumerate(amounts) if j != i and a <= amounts[i]]
            b_prime = max(below, default=0)
            if b_prime > 0:
                bids[(u, v)] = b_prime
    return Instance(instance.keywords, instance.bidders, bids)


@dataclass(frozen=True)
class FirstPriceAllocation:
    """Per-keyword winner assignment, in arrival order (winners may repeat)."""

    winners: tuple[tuple[str, str], ...]

    @property
    def winner_of(self) -> dict[str, str]:
        return dict(self.winners)

    @classmethod
    def from_mapping(cls, instance: Instance, mapping: Mapping[str, str]):
        return cls(tuple((u, mapping[u]) for u in instance.keywords if u in mapping))


def _as_allocation(instance: Instance, alloc) -> FirstPriceAllocation:
    if isinstance(alloc, FirstPriceAllocation):
        return alloc
    return FirstPriceAllocation.from_mapping(instance, dict(alloc))


def normalize_first_price(instance: Instance, alloc) -> FirstPriceAllocation:
    """Drop each bidder's allocations from the point its budget is exhausted.

    Keeps a keyword iff the bidder's bid-sum over earlier kept keywords is
    still strictly below its budget; the first-price value is unchanged
    because dropped keywords could only ever pay the leftover sliver.
    `instance` must be the transformed (first-price) instance.
    """
    allocation = _as_allocation(instance, alloc)
    spent: dict[str, int] = {}
    kept = []
    for u, v in allocation.winners:
        before = spent.get(v, 0)
        if before < instance.budget_of(v):
            kept.append((u, v))
            spent[v] = before + instance.bid(u, v)
    return FirstPriceAllocation(tuple(kept))


def resolve_second_bidder(instance: Instance, keyword: str, bidder: str) -> str:
    """Lowest-index other bidder whose original bid equals b'(keyword, bidder)."""
    target = max(
        (
            instance.bids.get((keyword, v), 0)
            for v in instance.bidder_ids
            if v != bidder
            and instance.bids.get((keyword, v), 0) <= instance.bids.get((keyword, bidder), 0)
        ),
        default=0,
    )
    for v in instance.bidder_ids:
        if v != bidder and instance.bids.get((keyword, v), 0) == target:
            return v
    raise UnresolvableSecondBidder(
        f"no bidder other than {bidder!r} bids {target} on {keyword!r}"
    )


def random_construction(
    instance: Instance,
    alloc,
    seed: int | None = None,
    *,
    marked: Iterable[str] | None = None,
) -> AuctionTrace:
    """Turn a first-price allocation into a feasible second-price trace.

    Marks each bidder with probability 1/2 (bidder-index order; `marked`
    overrides the coin stream).  For every unmarked winner v, the keywords
    whose resolved second bidder is marked form S_v in arrival order: all
    of S_v is taken when its transformed bids fit the budget, otherwise
    the better of (everything but the last) and (the last alone).  Each
    taken keyword charges exactly its transformed bid, so the expected
    value is at least one eighth of the allocation's first-price value.
    """
    allocation = _as_allocation(instance, alloc)
    prime = to_first_price_bids(instance)

    if marked is None:
        rng = random.Random(seed)
        mark = {v for v in instance.bidder_ids if rng.getrandbits(1)}
    else:
        mark = set(marked)

    chosen: dict[str, Assign] = {}
    by_winner: dict[str, list[tuple[str, int, str]]] = {}
    for u, v in allocation.winners:
        if v in mark:
            continue
        second = resolve_second_bidder(instance, u, v)
        if second in mark:
            by_winner.setdefault(v, []).append((u, prime.bids.get((u, v), 0), second))

    for v, entries in by_winner.items():
        budget = instance.budget_of(v)
        total = sum(b for _, b, _ in entries)
        if total <= budget:
            take = entries
        else:
            head, last = entries[:-1], entries[-1]
            take = head if sum(b for _, b, _ in head) >= last[1] else [last]
        for u, _, second in take:
            chosen[u] = Assign(v, second)

    actions: list[Action] = [chosen.get(u, SKIP) for u in instance.keywords]
    trace = execute(instance, actions)
    for step in trace.steps:
        if isinstance(step.action, Assign):
            expected = prime.bids.get((step.keyword, step.action.first), 0)
            assert step.price == expected, "taken keyword paid off its transformed bid"
    return trace
