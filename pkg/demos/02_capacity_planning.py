"""Worst-case memory planning for the trie.

The node bound is exact arithmetic: level i holds at most
min(size, fanout * level_{i-1}) nodes, so the whole pool can be
pre-allocated and the handle width chosen up front.

Run:  python3 demos/02_capacity_planning.py
"""

from glasstrie import CapacityModel, TrieGeometry, capacity_bound_for_size, max_size_for_capacity
from glasstrie.benchkit.capacity import capacity_report

SIZES = [900, 9000, 90000, 900000]

for width in (16, 32):
    print(f"== {width}-bit handles ({CapacityModel(TrieGeometry(50, 5), width).node_size_bytes}-byte nodes) ==")
    print(f"{'tree size':>12}  {'node bound':>12}  memory")
    for row in capacity_report(SIZES, width=width):
        print(f"{row.size:>12}  {row.node_bound:>12}  {row.memory}")
    print()

model = CapacityModel(TrieGeometry(key_bits=50, chunk_bits=5), width=16)
limit = (1 << 16) - 2  # two handle values are reserved
largest = max_size_for_capacity(limit, model)
print(f"largest tree size addressable with 16-bit handles: {largest}")
print(f"  (node bound at that size: {capacity_bound_for_size(largest, model)} <= {limit})")
print(f"  one more element would need {capacity_bound_for_size(largest + 1, model)} nodes")
