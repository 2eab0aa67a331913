"""How often does the bounded-probe cache table shrug?

The table inspects at most PROBE_LIMIT chain elements, so it can answer
"don't know" instead of walking a long chain; these probabilities say
how rarely that happens under uniform hashing, and a balls-in-bins
simulation plus a live table cross-check the arithmetic.

Run:  python3 demos/03_cache_table_probabilities.py
"""

import random

from glasstrie import create
from glasstrie.cachetable import DONT_KNOW
from glasstrie.benchkit.probability import (
    dunno_prob_absent,
    dunno_prob_present,
    dunno_table,
    simulate_dunno_absent,
)

N, BUCKETS = 9210, 32768  # a 16-bit-handle glass at full capacity

print(f"== don't-know probabilities, {N} keys in {BUCKETS} buckets ==")
print(f"{'probes':>6} {'present key':>14} {'absent key':>14}")
for j, p_present, p_absent in dunno_table(N, BUCKETS, range(9)):
    print(f"{j:>6} {p_present:>14.3e} {p_absent:>14.3e}")

print("\n== simulation cross-check (n=1000, b=1024, 2 probes) ==")
analytic = dunno_prob_absent(1000, 1024, 2)
estimate, stderr = simulate_dunno_absent(1000, 1024, 2, trials=2_000_000, seed=5)
print(f"analytic {analytic:.6f}   simulated {estimate:.6f} +- {stderr:.6f}")

print("\n== a real cache table under uniform keys ==")
rng = random.Random(3)
g = create(key_bits=50, chunk_bits=5, width=16, max_size=9211)
stored = set()
while len(stored) < N:
    k = rng.getrandbits(50)
    if g.insert(k, 1):
        stored.add(k)
probes = 300_000
hits = 0
for _ in range(probes):
    k = rng.getrandbits(50)
    if k not in stored and g.table.lookup(k >> 5) == DONT_KNOW:
        hits += 1
print(f"buckets: {g.table.bucket_count}, absent probes: {probes}, "
      f"don't-know rate: {hits / probes:.2e} "
      f"(idealized: {dunno_prob_absent(N, g.table.bucket_count, 5):.2e})")
