"""
Searching for counterexamples
=============================

Scan small integer matrices for finite-order elements and pair up the ones
with coprime periods.
"""

from collections import Counter

from torusrank.search import SearchConfig, enumerate_finite_order, find_counterexamples, group_by_period

items = enumerate_finite_order(SearchConfig(dim=2, entry_bound=3))
print("finite-order elements of GL(2,Z) with entries in [-3, 3]:", len(items))
print("period counts:", dict(sorted(Counter(m for _, m in items).items())))

for m, mats in group_by_period(items).items():
    print(m, mats[0])

certs = find_counterexamples(SearchConfig(entry_bound=1, require_orientable=True), limit=5)
for c in certs:
    print(f"A={c.A} (m={c.m})  B={c.B} (n={c.n})  ranks {c.rank_A}+{c.rank_B} < {c.rank_product}")
