"""Instance families: the skip-gap gadget, adaptive adversary, chains, samplers."""

import pytest

from auctionlab import (
    SKIP,
    Assign,
    ChainVariant,
    InvalidParams,
    NonDeterministicPolicy,
    adversary_vs_policy,
    execute,
    first_available,
    gap_instance,
    gap_witness_actions,
    greedy_2pm,
    max_matching,
    opt_2pm,
    perfect_matchable_2pm,
    r_min,
    random_2pm,
    random_2paa,
    ranking_1p,
    run_online,
    sample_chain,
    skip_all,
    validate,
)
from auctionlab.model import BudgetState

# ----------------------------------------------------------------------
# gap family


def test_gap_instance_shape():
    inst = gap_instance(2, 3)
    assert inst.m == 2 * (3 + 1)  # c drains+trigger, c*k harvests
    assert inst.bidder_ids == ("T", "L", "D", "H")
    assert validate(inst).ok


def test_gap_rejects_degenerate_parameters():
    with pytest.raises(InvalidParams):
        gap_instance(0, 3)
    with pytest.raises(InvalidParams):
        gap_instance(1, 1)


def test_gap_ratio_never_below_c():
    for c, k in ((1, 5), (2, 5), (3, 4)):
        assert r_min(gap_instance(c, k)) >= c


def test_gap_witness_beats_the_greedy_style_bound():
    for c, k in ((1, 5), (2, 4), (3, 3)):
        inst = gap_instance(c, k)
        trace = execute(inst, gap_witness_actions(c, k))
        assert trace.value == 1 + (c - 1) * k + c * k * (k - 1)
        assert trace.value > c * k * (k - 1)


def test_gap_witness_drains_l_to_k_minus_one():
    c, k = 2, 2
    inst = gap_instance(c, k)
    actions = gap_witness_actions(c, k)
    state = BudgetState.start(inst)
    for u, action in list(zip(inst.keywords, actions))[:c]:
        state.settle(inst.positive_bids(u), action)
    # after the trigger and all drains, L is one short of its bid
    assert state.remaining["L"] == k - 1


# ----------------------------------------------------------------------
# adaptive adversary


def test_adversary_caps_greedy_at_one():
    transcript = adversary_vs_policy(greedy_2pm(), 5)
    assert transcript.policy_value == 1
    assert transcript.switch_step == 1
    assert opt_2pm(transcript.instance).value == 5


def test_adversary_against_skip_all_never_switches():
    transcript = adversary_vs_policy(skip_all(), 4)
    assert transcript.policy_value == 0
    assert transcript.switch_step is None
    assert opt_2pm(transcript.instance).value == 4


def test_adversary_battery_dominates_every_deterministic_policy():
    for make in (greedy_2pm, skip_all, first_available):
        for m in (1, 2, 3, 4):
            transcript = adversary_vs_policy(make(), m)
            assert transcript.policy_value <= 1
            assert opt_2pm(transcript.instance).value == m


def test_adversary_transcript_is_a_real_instance():
    transcript = adversary_vs_policy(greedy_2pm(), 6)
    inst = transcript.instance
    assert validate(inst).ok
    assert all(len(inst.neighbors(u)) == 2 for u in inst.keywords)
    replay = execute(inst, transcript.trace.actions())
    assert replay.value == transcript.policy_value


def test_adversary_rejects_randomized_and_matching_policies():
    with pytest.raises(NonDeterministicPolicy):
        adversary_vs_policy(ranking_1p(seed=0), 3)
    with pytest.raises(InvalidParams):
        adversary_vs_policy(greedy_2pm(), 0)


# ----------------------------------------------------------------------
# chain distribution


def test_chain_single_keyword():
    sample = sample_chain(1, ChainVariant.NORMAL, seed=0)
    assert sample.pairs == (("b1", "b2"),)
    assert sample.coins == ()
    assert run_online(sample.instance, greedy_2pm()).value == 1


def test_chain_witness_is_perfect():
    for seed in range(20):
        sample = sample_chain(7, ChainVariant.NORMAL, seed=seed)
        trace = execute(sample.instance, sample.witness_actions)
        assert trace.value == sample.instance.m
        assert opt_2pm(sample.instance).value == sample.instance.m


def test_chain_structure_links_consecutive_keywords():
    sample = sample_chain(9, ChainVariant.NORMAL, seed=3)
    for i in range(len(sample.pairs) - 1):
        inherited = sample.pairs[i + 1][0]
        assert inherited in sample.pairs[i]
        assert sample.pairs[i + 1][1] == f"b{i + 3}"
    for kw, pair in zip(sample.instance.keywords, sample.pairs):
        assert sample.instance.neighbors(kw) == tuple(sorted(pair, key=lambda v: int(v[1:])))


def test_chain_is_seed_reproducible():
    a = sample_chain(8, ChainVariant.NORMAL, seed=11)
    b = sample_chain(8, ChainVariant.NORMAL, seed=11)
    assert a == b
    c = sample_chain(8, ChainVariant.NORMAL, seed=12)
    assert a.coins != c.coins or a.pairs != c.pairs


def test_restricted_chain_silences_one_first_pair_bidder():
    seen = set()
    for seed in range(20):
        sample = sample_chain(5, ChainVariant.RESTRICTED, seed=seed)
        assert sample.unavailable in sample.pairs[0]
        seen.add(sample.unavailable)
        assert sample.witness_actions is None
        for (u, v) in sample.instance.bids:
            assert v != sample.unavailable
    assert seen == {"b1", "b2"}


def test_chain_variant_accepts_plain_strings():
    sample = sample_chain(3, "restricted", seed=0)
    assert sample.variant is ChainVariant.RESTRICTED
    with pytest.raises(ValueError):
        sample_chain(3, "weird", seed=0)
    with pytest.raises(InvalidParams):
        sample_chain(0, ChainVariant.NORMAL, seed=0)


# ----------------------------------------------------------------------
# random samplers


def test_random_2pm_degree_padding():
    inst = random_2pm(6, 5, 0.0, seed=4)
    assert all(len(inst.neighbors(u)) == 2 for u in inst.keywords)
    dense = random_2pm(4, 5, 1.0, seed=4)
    assert all(len(dense.neighbors(u)) == 5 for u in dense.keywords)


def test_random_2pm_is_unit_and_reproducible():
    a = random_2pm(7, 6, 0.3, seed=21)
    assert a.is_unit()
    assert validate(a).ok
    assert a == random_2pm(7, 6, 0.3, seed=21)


def test_random_2pm_rejects_bad_parameters():
    with pytest.raises(InvalidParams):
        random_2pm(3, 1, 0.5, seed=0)
    with pytest.raises(InvalidParams):
        random_2pm(3, 4, 1.5, seed=0)


def test_random_2paa_honors_target_ratio():
    for target in (1, 2, 4):
        inst = random_2paa(6, 4, 9, target, seed=8)
        assert r_min(inst) >= target


def test_random_2paa_with_unit_bids_is_unit():
    inst = random_2paa(5, 4, 1, 1, seed=2)
    assert inst.is_unit()


def test_random_2paa_reproducible_and_checked():
    assert random_2paa(5, 3, 7, 2, seed=13) == random_2paa(5, 3, 7, 2, seed=13)
    with pytest.raises(InvalidParams):
        random_2paa(5, 0, 7, 2, seed=0)
    with pytest.raises(InvalidParams):
        random_2paa(5, 3, 7, 0, seed=0)


def test_perfect_matchable_has_a_perfect_matching():
    for seed in range(15):
        inst = perfect_matchable_2pm(6, 0.3, seed=seed)
        assert max_matching(inst).size == 6
        assert all(len(inst.neighbors(u)) >= 2 for u in inst.keywords)


def test_perfect_matchable_rejects_tiny_sides():
    with pytest.raises(InvalidParams):
        perfect_matchable_2pm(1, 0.3, seed=0)


def test_gap_witness_contains_expected_actions():
    actions = gap_witness_actions(2, 3)
    assert actions[0] == Assign("L", "T")
    assert actions[1] == Assign("L", "D")
    assert actions[2:] == [Assign("H", "L")] * 6
    assert SKIP not in actions
