"""Experiment suites: reproducibility, verdict rules, record persistence."""

import csv
import io
import json
import math
from fractions import Fraction

import pytest

from auctionlab import (
    EmptyStream,
    InvalidParams,
    TooLarge,
    UnknownSuite,
    ranking_sum_bound,
    run_experiment,
    summarize,
)
from auctionlab.formats import parse_frac, records_to_csv
from auctionlab.harness import (
    SUITES,
    TrialRecord,
    format_report,
    make_record,
    report_to_doc,
    violates,
    worker_cap,
)

# ----------------------------------------------------------------------
# analytic bound


def test_ranking_sum_bound_matches_geometric_closed_form():
    for n, k in ((1, 1), (4, 2), (6, 2), (8, 3)):
        q = Fraction(k * n, k * n + 1)
        closed = q * (1 - q**n) / (1 - q)
        assert ranking_sum_bound(n, k) == closed


def test_ranking_sum_bound_small_values():
    assert ranking_sum_bound(1, 1) == Fraction(1, 2)
    with pytest.raises(InvalidParams):
        ranking_sum_bound(0, 2)


# ----------------------------------------------------------------------
# summarize


def chain_record(trial, value, m=9):
    return make_record("greedy-chain", trial, trial ^ 3, f"chain m={m}", value, Fraction(m + 1, 2))


def test_summarize_constant_stream_has_zero_se():
    report = summarize([chain_record(i, 5) for i in range(10)])
    assert report.mean == 5
    assert report.se == 0.0
    assert report.kind == "target"
    assert report.bound == Fraction(5)
    assert report.passed


def test_summarize_sample_standard_deviation():
    report = summarize([chain_record(0, 0), chain_record(1, 2)])
    assert report.mean == 1
    assert report.stdev == pytest.approx(math.sqrt(2))
    assert report.se == pytest.approx(1.0)


def test_summarize_rejects_empty_and_mixed_streams():
    with pytest.raises(EmptyStream):
        summarize([])
    mixed = [chain_record(0, 5), make_record("top-c", 1, 1, "2paa 8x5 c=2", 5, 4)]
    with pytest.raises(InvalidParams):
        summarize(mixed)


def test_summarize_target_rule_fails_off_center():
    # zero spread, mean 9 vs target 5: no tolerance window can absorb it
    report = summarize([chain_record(i, 9) for i in range(10)])
    assert not report.passed


def test_summarize_lower_rule():
    good = [
        make_record("ranking-kcopy", i, i, "kcopy n=6 k=2", 6, ranking_sum_bound(6, 2))
        for i in range(8)
    ]
    assert summarize(good).passed
    bad = [
        make_record("ranking-kcopy", i, i, "kcopy n=6 k=2", 1, ranking_sum_bound(6, 2))
        for i in range(8)
    ]
    assert not summarize(bad).passed


def test_summarize_unknown_suite():
    rogue = TrialRecord("mystery", 0, 0, "x", 1, 1, Fraction(1))
    with pytest.raises(UnknownSuite):
        summarize([rogue])


# ----------------------------------------------------------------------
# violation predicates


def test_reverse_match_violation_rule():
    ok = make_record("reverse-match", 0, 0, "2pm 8x8 mf=5", 3, 5)
    assert not violates(ok)
    half_broken = make_record("reverse-match", 0, 0, "2pm 8x8 mf=5", 2, 5)
    assert violates(half_broken)  # 2*2 < 5
    ceil_broken = make_record("reverse-match", 0, 0, "2pm 8x8 mf=7", 3, 6)
    assert violates(ceil_broken)  # 3 < ceil(7/2)


def test_adversary_violation_rule():
    ok = make_record("adversary", 0, 0, "adversary policy=greedy m=5", 1, 5)
    assert not violates(ok)
    assert violates(make_record("adversary", 0, 0, "adversary policy=greedy m=5", 2, 5))
    assert violates(make_record("adversary", 0, 0, "adversary policy=greedy m=5", 1, 4))


def test_top_c_violation_rule():
    bound = Fraction(9, 2)
    assert not violates(make_record("top-c", 0, 0, "2paa 8x5 c=2", 5, bound))
    assert violates(make_record("top-c", 0, 0, "2paa 8x5 c=2", 4, bound))


def test_violation_rule_needs_descriptor_tokens():
    mangled = make_record("reverse-match", 0, 0, "2pm 8x8", 3, 5)
    with pytest.raises(InvalidParams):
        violates(mangled)


# ----------------------------------------------------------------------
# run_experiment


def test_run_experiment_is_deterministic():
    a_report, a_records = run_experiment("greedy-chain", trials=60, seed=42)
    b_report, b_records = run_experiment("greedy-chain", trials=60, seed=42)
    assert a_records == b_records
    assert a_report.mean == b_report.mean


def test_trial_seeds_are_seed_xor_index():
    _, records = run_experiment("greedy-chain", trials=40, seed=12)
    for record in records:
        assert record.seed == 12 ^ record.trial


def test_run_experiment_validates_inputs():
    with pytest.raises(UnknownSuite):
        run_experiment("no-such-suite", trials=5, seed=0)
    with pytest.raises(InvalidParams):
        run_experiment("greedy-chain", trials=0, seed=0)
    with pytest.raises(InvalidParams):
        run_experiment("greedy-chain", params={"height": 3}, trials=5, seed=0)


def test_run_experiment_coerces_string_params():
    _, records = run_experiment("greedy-chain", params={"m": "7"}, trials=5, seed=0)
    assert records[0].instance == "chain m=7"
    assert records[0].reference == Fraction(4)


def test_parallel_and_serial_runs_write_identical_csv(monkeypatch):
    def run_with(cap):
        monkeypatch.setenv("AUCTIONLAB_WORKERS", cap)
        _, records = run_experiment("greedy-chain", trials=520, seed=7)
        buf = io.StringIO()
        records_to_csv(records, buf)
        return buf.getvalue()

    assert run_with("1") == run_with("2")


def test_worker_cap_environment_handling(monkeypatch):
    monkeypatch.setenv("AUCTIONLAB_WORKERS", "3")
    assert worker_cap() == 3
    monkeypatch.setenv("AUCTIONLAB_WORKERS", "0")
    assert worker_cap() == 1
    monkeypatch.setenv("AUCTIONLAB_WORKERS", "many")
    with pytest.raises(InvalidParams):
        worker_cap()
    monkeypatch.delenv("AUCTIONLAB_WORKERS")
    assert worker_cap() >= 1


def test_adversary_suite_enumerates_instead_of_sampling():
    report, records = run_experiment("adversary", params={"m_max": 3}, trials=999, seed=0)
    assert len(records) == 9  # 3 policies x 3 arrival counts
    assert report.kind == "exact"
    assert report.passed
    assert {r.instance for r in records} == {
        f"adversary policy={p} m={m}"
        for p in ("greedy", "skip-all", "first-available")
        for m in (1, 2, 3)
    }


def test_skipped_trials_are_counted(monkeypatch):
    import auctionlab.harness as harness

    calls = {"n": 0}
    real = harness.opt_2pm

    def sometimes_too_large(inst, node_limit=None):
        calls["n"] += 1
        if calls["n"] % 2 == 1:
            raise TooLarge("forced")
        return real(inst)

    monkeypatch.setattr(harness, "opt_2pm", sometimes_too_large)
    report, records = run_experiment("reverse-match", trials=10, seed=0)
    assert report.skipped == 5
    assert len(records) == 5
    assert report.trials == 5


def test_every_documented_suite_runs_and_passes_smoke():
    for suite in SUITES:
        trials = 40 if suite != "adversary" else 1
        report, records = run_experiment(suite, trials=trials, seed=42)
        assert report.passed, format_report(report)
        assert records


# ----------------------------------------------------------------------
# persistence round trip


def _records_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    records = []
    for suite, trial, seed, instance, value, reference, ratio in rows[1:]:
        records.append(
            TrialRecord(
                suite,
                int(trial),
                int(seed),
                instance,
                int(value),
                parse_frac(reference),
                parse_frac(ratio),
            )
        )
    return records


def test_csv_round_trip_replays_the_verdict():
    for suite in ("greedy-chain", "reverse-match", "adversary"):
        report, records = run_experiment(suite, trials=50, seed=3)
        buf = io.StringIO()
        records_to_csv(records, buf)
        replayed = _records_from_csv(buf.getvalue())
        replay_report = summarize(replayed, skipped=report.skipped)
        assert replay_report.passed == report.passed
        assert replay_report.mean == report.mean
        assert replay_report.violations == report.violations
        assert replay_report.bound == report.bound


# ----------------------------------------------------------------------
# report rendering


def test_format_report_one_liner():
    report, _ = run_experiment("greedy-chain", trials=30, seed=1)
    line = format_report(report)
    assert line.startswith(("PASS greedy-chain:", "FAIL greedy-chain:"))
    assert "trials=30" in line
    assert "bound=5.0000" in line

    exact_report, _ = run_experiment("adversary", params={"m_max": 2}, seed=0)
    assert "violations=0" in format_report(exact_report)


def test_report_doc_is_json_clean():
    report, _ = run_experiment("greedy-chain", trials=12, seed=9)
    doc = report_to_doc(report)
    parsed = json.loads(json.dumps(doc))
    assert parsed["suite"] == "greedy-chain"
    assert parsed["bound"] == "5/1"
    assert parsed["trials"] == 12
