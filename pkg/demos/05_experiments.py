"""Seeded experiment suites and their verdicts.

run_experiment draws trial i from seed XOR i, so reports are identical
for any worker count (set AUCTIONLAB_WORKERS to cap the process pool).
Suites with a proved expectation check |mean - bound| <= 3 se; suites
with a proved lower bound check mean >= bound - 3 se; hard per-instance
guarantees are checked exactly and any violation fails the suite.
"""

import io

from auctionlab import ranking_sum_bound, run_experiment
from auctionlab.formats import records_to_csv
from auctionlab.harness import format_report

# Chain instances where greedy's expected value is (m+1)/2.
report, records = run_experiment("greedy-chain", params={"m": 9}, trials=2000, seed=7)
print(format_report(report))

# Ranking on a 2-copy of a perfectly matchable graph: the bound is the
# partial geometric sum below, not just a folklore 1 - 1/e.
print("ranking bound for n=6, k=2:", float(ranking_sum_bound(6, 2)))
report, _ = run_experiment("ranking-kcopy", trials=500, seed=7)
print(format_report(report))

# Hard guarantee suites count violations instead of comparing means.
report, _ = run_experiment("reverse-match", trials=300, seed=7)
print(format_report(report))

# The adversary suite enumerates a deterministic policy battery, so it
# ignores the trial count.
report, adversary_records = run_experiment("adversary", params={"m_max": 4}, seed=0)
print(format_report(report))
for record in adversary_records[:4]:
    print("  ", record.instance, "value", record.value, "opt", record.reference)

# Records serialize to CSV for offline inspection.
buffer = io.StringIO()
records_to_csv(records[:3], buffer)
print("\nfirst rows of the greedy-chain record file:")
print(buffer.getvalue().rstrip())
