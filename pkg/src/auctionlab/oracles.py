"""Exact reference solvers: maximum matching and brute-force optima.

The brute-force searches use memoized depth-first search whose state is
projected onto the bidders that still matter for the remaining keywords,
which keeps gadget-sized instances tractable.  Every search takes an
explicit node budget and fails deterministically with TooLarge beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InvalidParams, TooLarge, UnknownId
from .model import SKIP, Assign, AuctionTrace, Instance, execute

DEFAULT_NODE_LIMIT = 2_000_000


@dataclass(frozen=True)
class Matching:
    """Partial keyword -> bidder map, injective on bidders."""

    pairs: Mapping[str, str]

    def __post_init__(self) -> None:
        pairs = dict(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        inverse: dict[str, str] = {}
        for u, v in pairs.items():
            if v in inverse:
                raise ValueError(f"bidder {v!r} matched twice")
            inverse[v] = u
        object.__setattr__(self, "_inverse", inverse)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def bidder_of(self, keyword: str) -> str | None:
        return self.pairs.get(keyword)

    def keyword_of(self, bidder: str) -> str | None:
        return self._inverse.get(bidder)  # type: ignore[attr-defined]


@dataclass(frozen=True)
class OptResult:
    """Optimal value plus a witness that replays to exactly that value.

    The witness is an AuctionTrace for the auction searches and a
    keyword -> bidder winner mapping for the first-price search.
    """

    value: int
    witness: object


def max_matching(instance: Instance) -> Matching:
    """Maximum bipartite matching on positive-bid edges (augmenting paths).

    Deterministic: keywords are processed in arrival order and bidders
    probed in index order, so reruns yield the identical matching.
    """
    owner: dict[str, str] = {}  # bidder -> keyword

    def try_assign(u: str, visited: set[str]) -> bool:
        for v in instance.neighbors(u):
            if v in visited:
                continue
            visited.add(v)
            if v not in owner or try_assign(owner[v], visited):
                owner[v] = u
                return True
        return False

    for u in instance.keywords:
        try_assign(u, set())
    return Matching({u: v for v, u in owner.items()})


def _require_unit(instance: Instance, who: str) -> None:
    if not instance.is_unit():
        raise InvalidParams(f"{who} needs an all-ones instance (budgets 1, bids 0/1)")


def opt_2pm(instance: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> OptResult:
    """Optimal second-price matching value by exhaustive search.

    State is the set of bidders already charged; second-price bidders are
    not consumed, so allocating keyword u to v for profit 1 just needs some
    distinct uncharged neighbor at that moment.  Zero-price assignments
    leave the state unchanged and are dominated by Skip.
    """
    _require_unit(instance, "opt_2pm")
    index = {v: i for i, v in enumerate(instance.bidder_ids)}
    nbrs = [tuple(index[v] for v in instance.neighbors(u)) for u in instance.keywords]
    m = instance.m

    # bidders that still appear in keywords t..m-1
    future = [0] * (m + 1)
    for t in range(m - 1, -1, -1):
        mask = future[t + 1]
        for i in nbrs[t]:
            mask |= 1 << i
        future[t] = mask

    memo: dict[tuple[int, int], tuple[int, int | None]] = {}
    nodes = 0

    def best(t: int, consumed: int) -> int:
        nonlocal nodes
        if t == m:
            return 0
        key = (t, consumed & future[t])
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        nodes += 1
        if nodes > node_limit:
            raise TooLarge(f"opt_2pm exceeded node limit {node_limit}")
        value, choice = best(t + 1, consumed), None
        avail = [i for i in nbrs[t] if not consumed >> i & 1]
        if len(avail) >= 2:
            for i in avail:
                got = 1 + best(t + 1, consumed | 1 << i)
                if got > value:
                    value, choice = got, i
        memo[key] = (value, choice)
        return value

    total = best(0, 0)

    # replay the stored choices into an explicit trace
    ids = instance.bidder_ids
    actions = []
    consumed = 0
    for t in range(m):
        choice = memo[(t, consumed & future[t])][1]
        if choice is None:
            actions.append(SKIP)
        else:
            second = next(i for i in nbrs[t] if i != choice and not consumed >> i & 1)
            actions.append(Assign(ids[choice], ids[second]))
            consumed |= 1 << choice
    trace = execute(instance, actions)
    assert trace.value == total, "witness replay disagrees with search"
    return OptResult(total, trace)


def _search_frame(instance: Instance):
    """Shared prep for the budgeted searches: indexed rows and projections."""
    index = {v: i for i, v in enumerate(instance.bidder_ids)}
    rows = [
        tuple((index[v], a) for v, a in instance.positive_bids(u).items())
        for u in instance.keywords
    ]
    m = instance.m
    future: list[tuple[int, ...]] = [()] * (m + 1)
    acc: set[int] = set()
    for t in range(m - 1, -1, -1):
        acc |= {i for i, _ in rows[t]}
        future[t] = tuple(sorted(acc))
    budgets = [b for _, b in instance.bidders]
    return index, rows, future, budgets


def second_bid_upper_bound(instance: Instance) -> int:
    """Sum over keywords of the second-highest original bid (0 if < 2 positive).

    No solution can beat this: any charged price is the smaller of two
    distinct bidders' bids, hence at most the keyword's second-highest.
    """
    total = 0
    for u in instance.keywords:
        amounts = sorted(instance.positive_bids(u).values(), reverse=True)
        if len(amounts) >= 2:
            total += amounts[1]
    return total


def opt_2paa(instance: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> OptResult:
    """Optimal budgeted second-price auction value by exhaustive search.

    Explores Skip plus every ordered pair of positive bidders whose price
    would be positive, memoized on the remaining-budget vector projected to
    bidders still relevant.  Prices never exceed the per-keyword
    second-highest original bid, which bounds subtree values.
    """
    _, rows, future, budgets0 = _search_frame(instance)
    m = instance.m

    s_u = []
    for t in range(m):
        amounts = sorted((a for _, a in rows[t]), reverse=True)
        s_u.append(amounts[1] if len(amounts) >= 2 else 0)
    suffix = [0] * (m + 1)
    for t in range(m - 1, -1, -1):
        suffix[t] = suffix[t + 1] + s_u[t]

    memo: dict[tuple, tuple[int, tuple[int, int, int] | None]] = {}
    nodes = 0

    def best(t: int, rem: tuple[int, ...]) -> int:
        nonlocal nodes
        if t == m or suffix[t] == 0:
            return 0
        key = (t,) + tuple(rem[i] for i in future[t])
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        nodes += 1
        if nodes > node_limit:
            raise TooLarge(f"opt_2paa exceeded node limit {node_limit}")
        value, choice = best(t + 1, rem), None
        row = rows[t]
        for j, (second, bid2) in enumerate(row):
            eff2 = min(bid2, rem[second])
            if eff2 <= 0:
                continue
            for i, (first, bid1) in enumerate(row):
                if i == j or min(bid1, rem[first]) < eff2:
                    continue
                child = list(rem)
                child[first] -= eff2
                got = eff2 + best(t + 1, tuple(child))
                if got > value:
                    value, choice = got, (first, second, eff2)
        memo[key] = (value, choice)
        return value

    total = best(0, tuple(budgets0))

    ids = instance.bidder_ids
    actions = []
    rem = list(budgets0)
    for t in range(m):
        if t == m or suffix[t] == 0:
            actions.extend([SKIP] * (m - t))
            break
        choice = memo[(t,) + tuple(rem[i] for i in future[t])][1]
        if choice is None:
            actions.append(SKIP)
        else:
            first, second, price = choice
            actions.append(Assign(ids[first], ids[second]))
            rem[first] -= price
    trace = execute(instance, actions)
    assert trace.value == total, "witness replay disagrees with search"
    return OptResult(total, trace)


def opt_1paa(instance: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> OptResult:
    """Optimal budgeted first-price value; the winner pays its effective bid.

    Witness is a keyword -> bidder mapping (winners may repeat bidders).
    """
    _, rows, future, budgets0 = _search_frame(instance)
    m = instance.m

    memo: dict[tuple, tuple[int, tuple[int, int] | None]] = {}
    nodes = 0

    def best(t: int, rem: tuple[int, ...]) -> int:
        nonlocal nodes
        if t == m:
            return 0
        key = (t,) + tuple(rem[i] for i in future[t])
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        nodes += 1
        if nodes > node_limit:
            raise TooLarge(f"opt_1paa exceeded node limit {node_limit}")
        value, choice = best(t + 1, rem), None
        for winner, bid in rows[t]:
            eff = min(bid, rem[winner])
            if eff <= 0:
                continue
            child = list(rem)
            child[winner] -= eff
            got = eff + best(t + 1, tuple(child))
            if got > value:
                value, choice = got, (winner, eff)
        memo[key] = (value, choice)
        return value

    total = best(0, tuple(budgets0))

    ids = instance.bidder_ids
    winners: dict[str, str] = {}
    rem = list(budgets0)
    for t in range(m):
        choice = memo[(t,) + tuple(rem[i] for i in future[t])][1]
        if choice is not None:
            winner, price = choice
            winners[instance.keywords[t]] = ids[winner]
            rem[winner] -= price
    assert first_price_value(instance, winners) == total
    return OptResult(total, winners)


def first_price_value(instance: Instance, winners: Mapping[str, str]) -> int:
    """Value of a first-price winner assignment: each pays min(bid, remaining)."""
    rem = instance.initial_budgets()
    total = 0
    for u in instance.keywords:
        v = winners.get(u)
        if v is None:
            continue
        if v not in rem:
            raise UnknownId(f"unknown bidder {v!r}")
        price = min(instance.bid(u, v), rem[v])
        rem[v] -= price
        total += price
    return total
