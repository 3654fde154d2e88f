"""
Latency at production scale
===========================

A seeded synthetic base of 1700 rules (lexical pairs, 10% multi-condition
rules, 5% sort-conditioned refinements) and 15-condition inputs.  Pass a rule
count as the first argument to try other sizes.
"""

import sys

from semtransfer.bench import run_bench

count = int(sys.argv[1]) if len(sys.argv) > 1 else 1700

# %% Latency with the trie index, then with every rule tried in turn.
report = run_bench(rule_count=count, input_size=15, runs=500, seed=0)
print(report.as_text())

# %% How retrieval scales: the naive scan grows with the base, the trie walk
# grows with the input.
for n in (100, 400, 1700, 6800):
    r = run_bench(rule_count=n, input_size=15, runs=100, seed=0)
    print(f"{n:5d} rules: index {r.retrieval_index_us:7.1f} us  scan {r.retrieval_scan_us:8.1f} us  "
          f"transfer {r.mean_ms:.3f} ms")
