"""Instance generators: worst-case families, adversaries, and random samplers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import InvalidParams, NonDeterministicPolicy
from .model import (
    SKIP,
    Action,
    Assign,
    AuctionTrace,
    BudgetState,
    Instance,
    TraceStep,
)
from .online import OnlinePolicy


# ----------------------------------------------------------------------
# budget-reuse gap family


def gap_instance(c: int, k: int) -> Instance:
    """Family where skipping early keywords wins despite healthy budgets.

    One trigger keyword, c-1 drain keywords, and c*k harvest keywords.
    Bidder L bids k everywhere with budget c*k, so every budget-to-bid
    ratio is at least c; draining L down to k-1 makes it a cheap second
    for every harvest keyword.
    """
    if c < 1 or k < 2:
        raise InvalidParams(f"need c >= 1 and k >= 2, got c={c}, k={k}")
    trigger = "w0"
    drains = tuple(f"w{j}" for j in range(1, c))
    harvests = tuple(f"q{j}" for j in range(1, c * k + 1))
    keywords = (trigger,) + drains + harvests
    bidders = (("T", c), ("L", c * k), ("D", c * k), ("H", c * k * k))
    bids: dict[tuple[str, str], int] = {(trigger, "T"): 1}
    for u in keywords:
        bids[(u, "L")] = k
    for u in drains:
        bids[(u, "D")] = k
    for u in harvests:
        bids[(u, "H")] = k
    return Instance(keywords, bidders, bids)


def gap_witness_actions(c: int, k: int) -> list[Action]:
    """Replay achieving 1 + (c-1)k + ck(k-1): trigger, drain L, then harvest."""
    actions: list[Action] = [Assign("L", "T")]
    actions.extend(Assign("L", "D") for _ in range(c - 1))
    actions.extend(Assign("H", "L") for _ in range(c * k))
    return actions


# ----------------------------------------------------------------------
# adaptive adversary for deterministic online policies


@dataclass(frozen=True)
class AdversaryTranscript:
    """Instance built against a policy, with the policy's executed trace.

    `switch_step` is the 1-based arrival at which the policy first paid a
    positive price (None if it never did).
    """

    instance: Instance
    trace: AuctionTrace
    switch_step: int | None

    @property
    def policy_value(self) -> int:
        return self.trace.value


def adversary_vs_policy(policy: OnlinePolicy, m: int) -> AdversaryTranscript:
    """Feed m keywords adaptively so the policy earns at most 1 while OPT = m.

    Until the policy first charges a positive price, every keyword brings
    two fresh bidders.  From then on, every keyword pairs the bidder the
    policy consumed with one fresh bidder, so no later allocation can pay.
    """
    if m < 1:
        raise InvalidParams(f"m must be >= 1, got {m}")
    if not getattr(policy, "deterministic", False):
        raise NonDeterministicPolicy("adversary requires a deterministic policy")
    if policy.kind != "auction":
        raise NonDeterministicPolicy("adversary plays the second-price game")

    policy.reset((), random.Random(0))
    state = BudgetState({})
    keywords: list[str] = []
    bidder_order: list[str] = []
    bids: dict[tuple[str, str], int] = {}
    steps: list[TraceStep] = []
    anchor: str | None = None
    switch: int | None = None

    def fresh(name: str) -> str:
        bidder_order.append(name)
        state.remaining[name] = 1
        return name

    for t in range(1, m + 1):
        kw = f"u{t}"
        keywords.append(kw)
        if anchor is None:
            row = {fresh(f"a{t}"): 1, fresh(f"b{t}"): 1}
        else:
            row = {anchor: 1, fresh(f"c{t}"): 1}
        for v, amount in row.items():
            bids[(kw, v)] = amount
        action = policy.decide(t - 1, kw, dict(row), dict(state.remaining))
        price = state.settle(row, action)
        steps.append(TraceStep(kw, action, price))
        if anchor is None and price > 0:
            anchor = action.first  # type: ignore[union-attr]
            switch = t

    instance = Instance(
        tuple(keywords), tuple((v, 1) for v in bidder_order), bids
    )
    trace = AuctionTrace(
        tuple(steps), sum(s.price for s in steps), dict(state.remaining)
    )
    return AdversaryTranscript(instance, trace, switch)


# ----------------------------------------------------------------------
# chain distribution


class ChainVariant(Enum):
    NORMAL = "normal"
    RESTRICTED = "restricted"


@dataclass(frozen=True)
class ChainSample:
    """A chain draw: each keyword shares one endpoint with its successor.

    `pairs` holds each keyword's two structural bidders; under RESTRICTED
    one bidder of the first keyword is unavailable and places no bids.
    `witness_actions` (NORMAL only) replays a perfect solution.
    """

    instance: Instance
    variant: ChainVariant
    coins: tuple[int, ...]
    pairs: tuple[tuple[str, str], ...]
    unavailable: str | None
    witness_actions: tuple[Action, ...] | None


def sample_chain(m: int, variant: ChainVariant, seed: int | None = None) -> ChainSample:
    """Draw an m-keyword chain; successor keywords inherit a uniform endpoint.

    Keyword 1 sees two fresh bidders; keyword i+1 sees one uniformly chosen
    bidder of keyword i plus one fresh bidder.  RESTRICTED marks one of the
    first keyword's bidders (uniformly) unavailable: it stays listed but
    places no bids.
    """
    if m < 1:
        raise InvalidParams(f"m must be >= 1, got {m}")
    variant = ChainVariant(variant)
    rng = random.Random(seed)

    unavailable: str | None = None
    coins: list[int] = []
    pairs: list[tuple[str, str]] = [("b1", "b2")]
    if variant is ChainVariant.RESTRICTED:
        unavailable = pairs[0][rng.getrandbits(1)]
    for i in range(2, m + 1):
        coin = rng.getrandbits(1)
        coins.append(coin)
        pairs.append((pairs[-1][coin], f"b{i + 1}"))

    keywords = tuple(f"u{i}" for i in range(1, m + 1))
    bidder_ids = tuple(f"b{i}" for i in range(1, m + 2))
    bids = {
        (kw, v): 1
        for kw, pair in zip(keywords, pairs)
        for v in pair
        if v != unavailable
    }
    instance = Instance(keywords, tuple((v, 1) for v in bidder_ids), bids)

    witness = None
    if variant is ChainVariant.NORMAL:
        actions: list[Action] = []
        for i, pair in enumerate(pairs):
            if i + 1 < len(pairs):
                inherited = pairs[i + 1][0]
                other = pair[1] if pair[0] == inherited else pair[0]
                actions.append(Assign(other, inherited))
            else:
                actions.append(Assign(pair[1], pair[0]))
        witness = tuple(actions)

    return ChainSample(instance, variant, tuple(coins), tuple(pairs), unavailable, witness)


# ----------------------------------------------------------------------
# random samplers


def random_2pm(
    num_keywords: int,
    num_bidders: int,
    edge_probability: float,
    seed: int | None = None,
) -> Instance:
    """Bernoulli bipartite all-ones instance, padded so every degree is >= 2.

    Keywords left under degree 2 receive uniformly chosen distinct extra
    neighbors until they reach degree exactly 2.
    """
    if num_keywords < 0 or num_bidders < 2:
        raise InvalidParams("need num_keywords >= 0 and num_bidders >= 2")
    if not 0.0 <= edge_probability <= 1.0:
        raise InvalidParams(f"edge probability {edge_probability} outside [0, 1]")
    rng = random.Random(seed)
    keywords = tuple(f"u{i}" for i in range(1, num_keywords + 1))
    bidder_ids = tuple(f"v{j}" for j in range(1, num_bidders + 1))
    bids: dict[tuple[str, str], int] = {}
    for u in keywords:
        row = [v for v in bidder_ids if rng.random() < edge_probability]
        while len(row) < 2:
            extra = [v for v in bidder_ids if v not in row]
            row.append(extra[rng.randrange(len(extra))])
        for v in row:
            bids[(u, v)] = 1
    return Instance(keywords, tuple((v, 1) for v in bidder_ids), bids)


def random_2paa(
    num_keywords: int,
    num_bidders: int,
    max_bid: int,
    target_r_min: int,
    seed: int | None = None,
) -> Instance:
    """Uniform integer bids in [0, max_bid]; budgets guarantee the target ratio.

    Each bidder's budget is target_r_min times its largest bid (at least
    target_r_min), so the minimum budget-to-bid ratio is >= target_r_min.
    """
    if num_keywords < 0 or num_bidders < 1:
        raise InvalidParams("need num_keywords >= 0 and num_bidders >= 1")
    if max_bid < 0 or target_r_min < 1:
        raise InvalidParams("need max_bid >= 0 and target_r_min >= 1")
    rng = random.Random(seed)
    keywords = tuple(f"u{i}" for i in range(1, num_keywords + 1))
    bidder_ids = tuple(f"v{j}" for j in range(1, num_bidders + 1))
    bids: dict[tuple[str, str], int] = {}
    top: dict[str, int] = {}
    for u in keywords:
        for v in bidder_ids:
            amount = rng.randint(0, max_bid)
            if amount > 0:
                bids[(u, v)] = amount
                top[v] = max(top.get(v, 0), amount)
    bidders = tuple((v, target_r_min * max(top.get(v, 0), 1)) for v in bidder_ids)
    return Instance(keywords, bidders, bids)


def perfect_matchable_2pm(
    n: int, extra_edge_prob: float, seed: int | None = None
) -> Instance:
    """All-ones n-by-n instance containing a perfect matching, degrees >= 2.

    A random perfect matching is planted, Bernoulli extras added, and thin
    keywords padded; padding preserves the planted matching.
    """
    if n < 2:
        raise InvalidParams(f"need n >= 2, got {n}")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise InvalidParams(f"edge probability {extra_edge_prob} outside [0, 1]")
    rng = random.Random(seed)
    keywords = tuple(f"u{i}" for i in range(1, n + 1))
    bidder_ids = tuple(f"v{j}" for j in range(1, n + 1))
    planted = list(bidder_ids)
    rng.shuffle(planted)
    bids: dict[tuple[str, str], int] = {}
    for u, mate in zip(keywords, planted):
        row = {mate}
        row.update(v for v in bidder_ids if rng.random() < extra_edge_prob)
        while len(row) < 2:
            extra = [v for v in bidder_ids if v not in row]
            row.add(extra[rng.randrange(len(extra))])
        for v in row:
            bids[(u, v)] = 1
    return Instance(keywords, tuple((v, 1) for v in bidder_ids), bids)
