"""Online policies and the arrival-order driver.

The driver reveals one keyword at a time: a policy sees only the arriving
keyword's positive bids plus the current remaining budgets, so decisions
can never depend on the future.  Policies carry per-run mutable state and
are reset at the start of every run.  Randomized policies draw from their
own seed when constructed with one, otherwise from the driver's seed;
permutation and coin randomness come from separate sub-streams so one can
be held fixed while the other is enumerated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import PolicyViolation
from .model import (
    SKIP,
    Action,
    Assign,
    AuctionTrace,
    BudgetState,
    Instance,
    Skip,
    TraceStep,
)
from .oracles import Matching


class OnlinePolicy:
    """Decision contract for online runs.

    `kind` is "auction" (decide() returns an Action) or "matching"
    (choose() returns a bidder or None).  `deterministic` declares whether
    the policy ignores randomness; the adaptive adversary insists on it.
    """

    kind = "auction"
    deterministic = False

    def reset(self, bidder_ids: Sequence[str], rng: random.Random) -> None:
        """Prepare for a fresh run over a (possibly empty) bidder universe."""

    def decide(
        self,
        step: int,
        keyword: str,
        bids: Mapping[str, int],
        budgets: Mapping[str, int],
    ) -> Action:
        raise NotImplementedError

    def choose(self, step: int, keyword: str, bids: Mapping[str, int]) -> str | None:
        raise NotImplementedError


class _GreedyUnit(OnlinePolicy):
    """Match the first available neighbor iff another is available as second."""

    deterministic = True

    def decide(self, step, keyword, bids, budgets):
        avail = [v for v in bids if budgets[v] >= 1]
        if len(avail) >= 2:
            return Assign(avail[0], avail[1])
        return SKIP


class _SkipAll(OnlinePolicy):
    """Never allocate anything."""

    deterministic = True

    def decide(self, step, keyword, bids, budgets):
        return SKIP


class _FirstAvailable(OnlinePolicy):
    """Match the first available neighbor even without a paying second.

    The second is the first *other* neighbor regardless of its budget,
    so the price may be 0.
    """

    deterministic = True

    def decide(self, step, keyword, bids, budgets):
        nbrs = list(bids)
        avail = [v for v in nbrs if budgets[v] >= 1]
        if avail and len(nbrs) >= 2:
            first = avail[0]
            second = next(v for v in nbrs if v != first)
            return Assign(first, second)
        return SKIP


def greedy_2pm() -> OnlinePolicy:
    """Deterministic greedy for all-ones instances.

    Assigns the lowest-index available neighbor as first and the next
    lowest as second when at least two neighbors are available, else skips.
    Neighbor order is the order the driver presents (bidder-index order).
    """
    return _GreedyUnit()


def skip_all() -> OnlinePolicy:
    """Policy that skips every keyword (battery baseline)."""
    return _SkipAll()


def first_available() -> OnlinePolicy:
    """Eager matcher that does not check for a paying second bidder."""
    return _FirstAvailable()


@dataclass
class RankingState:
    """Random permutation plus the matched/reserved bookkeeping sets."""

    rank: dict[str, int] = field(default_factory=dict)
    matched: set[str] = field(default_factory=set)
    reserved: set[str] = field(default_factory=set)

    def priority_order(self, candidates) -> list[str]:
        return sorted(candidates, key=lambda v: self.rank[v])


def _draw_rank(
    bidder_ids: Sequence[str],
    rng: random.Random,
    sigma: Sequence[str] | None,
) -> dict[str, int]:
    if sigma is not None:
        order = list(sigma)
        if sorted(order) != sorted(bidder_ids):
            raise PolicyViolation("sigma must be a permutation of the bidder ids")
    else:
        order = list(bidder_ids)
        rng.shuffle(order)
    return {v: i for i, v in enumerate(order)}


class _Ranking(OnlinePolicy):
    """First-price matching by a uniform random priority over bidders."""

    kind = "matching"

    def __init__(self, seed=None, sigma=None):
        self._seed = seed
        self._sigma = sigma
        self.state = RankingState()

    def reset(self, bidder_ids, rng):
        source = random.Random(self._seed) if self._seed is not None else rng
        self.state = RankingState(_draw_rank(bidder_ids, source, self._sigma))

    def choose(self, step, keyword, bids):
        avail = [v for v in bids if v not in self.state.matched]
        if not avail:
            return None
        v = self.state.priority_order(avail)[0]
        self.state.matched.add(v)
        return v


def ranking_1p(seed: int | None = None, *, sigma: Sequence[str] | None = None) -> OnlinePolicy:
    """Ranking for first-price matching; output is a Matching, not a trace.

    `sigma` fixes the priority permutation explicitly (highest first);
    otherwise it is drawn from `seed`, falling back to the driver's seed.
    """
    return _Ranking(seed, sigma)


class _RankingSimulate(OnlinePolicy):
    """Two-sided randomized matcher for all-ones second-price instances.

    Keeps matched (M) and reserved (R) sets.  Among neighbors outside
    M and R: none -> skip; one -> fair coin between matching it and
    reserving it; two or more -> the two priority-minimizing bidders,
    a fair coin matching one and reserving the other.  A match charges 1
    iff some distinct neighbor is outside M at that moment (reserved
    bidders are unmatched, so they are eligible seconds); otherwise the
    match earns nothing and the trace records a skip.
    """

    def __init__(self, seed=None, sigma=None, coins=None):
        self._seed = seed
        self._sigma = sigma
        self._coins = coins
        self.state = RankingState()

    def reset(self, bidder_ids, rng):
        source = random.Random(self._seed) if self._seed is not None else rng
        # independent sub-streams: sigma first, coins after
        sigma_rng = random.Random(source.getrandbits(64))
        coin_rng = random.Random(source.getrandbits(64))
        self.state = RankingState(_draw_rank(bidder_ids, sigma_rng, self._sigma))
        if self._coins is not None:
            stream = iter(self._coins)

            def flip() -> int:
                try:
                    return 1 if next(stream) else 0
                except StopIteration:
                    raise PolicyViolation("forced coin stream exhausted") from None

        else:

            def flip() -> int:
                return coin_rng.getrandbits(1)

        self._flip = flip

    def decide(self, step, keyword, bids, budgets):
        st = self.state
        nbrs = list(bids)
        fresh = [v for v in nbrs if v not in st.matched and v not in st.reserved]
        if not fresh:
            return SKIP
        if len(fresh) == 1:
            winner = fresh[0] if self._flip() else None
            if winner is None:
                st.reserved.add(fresh[0])
                return SKIP
        else:
            v1, v2 = st.priority_order(fresh)[:2]
            winner, standby = (v1, v2) if self._flip() else (v2, v1)
            st.reserved.add(standby)
        seconds = [v for v in nbrs if v != winner and v not in st.matched]
        st.matched.add(winner)
        if seconds:
            return Assign(winner, seconds[0])
        return SKIP


def ranking_simulate(
    seed: int | None = None,
    *,
    sigma: Sequence[str] | None = None,
    coins: Sequence[int] | None = None,
) -> OnlinePolicy:
    """RankingSimulate policy; `sigma` and `coins` override the sub-streams."""
    return _RankingSimulate(seed, sigma, coins)


@dataclass(frozen=True)
class LeftKCopy:
    """k-fold keyword duplication; `zeta` maps copy ids back to originals."""

    instance: Instance
    zeta: Mapping[str, str]


def left_k_copy(instance: Instance, k: int) -> LeftKCopy:
    """Duplicate every keyword k times, copies arriving consecutively.

    Each copy keeps the original's bids; bidders and budgets are shared.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    taken = set(instance.keywords)
    keywords: list[str] = []
    zeta: dict[str, str] = {}
    for u in instance.keywords:
        for i in range(1, k + 1):
            copy = f"{u}@{i}"
            while copy in taken or copy in zeta:
                copy = copy + "'"
            keywords.append(copy)
            zeta[copy] = u
    bids = {}
    for copy, u in zeta.items():
        for v, a in instance.positive_bids(u).items():
            bids[(copy, v)] = a
    return LeftKCopy(Instance(tuple(keywords), instance.bidders, bids), zeta)


def run_online(instance: Instance, policy: OnlinePolicy, seed: int | None = None):
    """Drive a policy over the instance in arrival order.

    Returns an AuctionTrace for auction policies and a Matching for
    matching policies.  The driver enforces causality structurally: the
    policy sees only the arriving keyword's bids plus current budgets.
    """
    rng = random.Random(seed)
    policy.reset(instance.bidder_ids, rng)

    if policy.kind == "matching":
        pairs: dict[str, str] = {}
        taken: set[str] = set()
        for step, keyword in enumerate(instance.keywords):
            bids = instance.positive_bids(keyword)
            v = policy.choose(step, keyword, bids)
            if v is None:
                continue
            if v not in bids or v in taken:
                raise PolicyViolation(
                    f"policy matched {keyword!r} to unavailable bidder {v!r}"
                )
            taken.add(v)
            pairs[keyword] = v
        return Matching(pairs)

    state = BudgetState.start(instance)
    steps = []
    for step, keyword in enumerate(instance.keywords):
        bids = instance.positive_bids(keyword)
        action = policy.decide(step, keyword, bids, dict(state.remaining))
        if not isinstance(action, (Assign, Skip)):
            raise PolicyViolation(f"policy returned {action!r}, not an action")
        price = state.settle(bids, action)
        steps.append(TraceStep(keyword, action, price))
    return AuctionTrace(tuple(steps), sum(s.price for s in steps), dict(state.remaining))
