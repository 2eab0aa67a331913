"""Fixed-layout trie node pool with a free-list slot allocator.

Nodes live in parallel arrays indexed by integer handles rather than
machine pointers; a handle fits 16 or 32 bits, with the top two values
of the range reserved (INVALID for "end / not found", BAD for spoiled
cached iterators), so capacity never exceeds 2**width - 2.

Free slots form a singly-linked list threaded through the ``free_link``
field. With trash encoding enabled that field is stored so that
all-zero memory reads as "next slot in the array", which keeps the
never-touched tail of a freshly (pre-)allocated pool byte-for-byte zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitops import TrieGeometry
from .errors import ConfigError, PoolExhausted

#: bytes per node for each supported handle width
NODE_BYTES = {16: 48, 32: 80}


def invalid_handle(width: int) -> int:
    return (1 << width) - 1


def bad_handle(width: int) -> int:
    return (1 << width) - 2


def trash_decode(stored: int, slot: int) -> int | None:
    """Decode a free node's next-free field.

    0 means "the next slot in the array", 1 means "no next node",
    anything else is a handle biased by two.
    """
    if stored == 0:
        return slot + 1
    if stored == 1:
        return None
    return stored - 2


def trash_encode(target: int | None, slot: int) -> int:
    """Inverse of :func:`trash_decode`; never overflows the handle width
    because capacity is capped two below the width's range."""
    if target is None:
        return 1
    if target == slot + 1:
        return 0
    return target + 2


class Pool:
    """Growable array of trie nodes with O(1) allocate/deallocate.

    Storage is struct-of-arrays: ``mask``, ``parent``, ``chain_next``,
    ``chain_prev``, ``cache_key`` and ``free_link`` hold one int per
    node; ``children`` and ``values`` are flat, ``fanout`` entries per
    node. Memory handed out is always mask-zeroed, mirroring a zeroing
    allocator, so a fresh node needs no initialization.
    """

    def __init__(
        self,
        geo: TrieGeometry,
        width: int = 32,
        max_capacity: int | None = None,
        preallocate: bool = True,
        trash_encoding: bool = True,
        debug: bool = False,
    ):
        if width not in NODE_BYTES:
            raise ConfigError(f"handle width must be 16 or 32, got {width}")
        limit = (1 << width) - 2
        if max_capacity is None:
            max_capacity = limit
        if not 0 <= max_capacity <= limit:
            raise ConfigError(
                f"max capacity {max_capacity} not addressable by {width}-bit handles"
            )
        self.geo = geo
        self.width = width
        self.invalid = invalid_handle(width)
        self.bad = bad_handle(width)
        self.max_capacity = max_capacity
        self.trash_encoding = trash_encoding
        self.debug = debug  # double-free tracking (a debug-build check)
        self.live_count = 0
        self.capacity = max_capacity if preallocate else min(max_capacity, 16)
        self._alloc_storage(self.capacity)
        self.first_free = 0 if self.capacity > 0 else self.invalid
        if not trash_encoding:
            self._write_chain(0, self.capacity)
        self._free_set = set(range(self.capacity)) if debug else set()

    def _alloc_storage(self, capacity: int):
        n = self.geo.fanout
        self.mask = [0] * capacity
        self.parent = [0] * capacity
        self.chain_next = [0] * capacity
        self.chain_prev = [0] * capacity
        self.cache_key = [0] * capacity
        self.free_link = [0] * capacity
        self.children = [0] * (capacity * n)
        self.values = [None] * (capacity * n)

    def _write_chain(self, start: int, end: int):
        """Explicit free chain for the non-trash layout."""
        link = self.free_link
        for j in range(start, end - 1):
            link[j] = j + 1
        if end > start:
            link[end - 1] = self.invalid

    def _grow(self):
        if self.capacity >= self.max_capacity:
            raise PoolExhausted(
                f"pool at configured maximum capacity {self.max_capacity}"
            )
        new_cap = min(self.max_capacity, max(16, self.capacity * 2))
        added = new_cap - self.capacity
        n = self.geo.fanout
        self.mask += [0] * added
        self.parent += [0] * added
        self.chain_next += [0] * added
        self.chain_prev += [0] * added
        self.cache_key += [0] * added
        self.free_link += [0] * added
        self.children += [0] * (added * n)
        self.values += [None] * (added * n)
        if not self.trash_encoding:
            self._write_chain(self.capacity, new_cap)
        if self.debug:
            self._free_set.update(range(self.capacity, new_cap))
        self.first_free = self.capacity
        self.capacity = new_cap

    def _next_free_of(self, p: int) -> int:
        if self.trash_encoding:
            nxt = trash_decode(self.free_link[p], p)
            return self.invalid if nxt is None else nxt
        return self.free_link[p]

    def allocate(self) -> int:
        """Pop the free-list head; grows the array only when it is empty."""
        p = self.first_free
        if p == self.invalid or p >= self.capacity:
            self._grow()
            p = self.first_free
        self.first_free = self._next_free_of(p)
        self.live_count += 1
        if self.debug:
            self._free_set.discard(p)
        assert self.mask[p] == 0, "allocated node must arrive blank"
        return p

    def deallocate(self, p: int):
        """Push ``p`` onto the free-list head; O(1), no traversal.

        Node fields are re-zeroed so the slot reads as blank memory when
        it is allocated again.
        """
        if self.debug:
            assert p not in self._free_set, f"double free of node {p}"
            self._free_set.add(p)
        self.mask[p] = 0
        self.parent[p] = 0
        self.chain_next[p] = 0
        self.chain_prev[p] = 0
        self.cache_key[p] = 0
        if self.trash_encoding:
            head = self.first_free
            if head == self.invalid or head >= self.capacity:
                self.free_link[p] = trash_encode(None, p)
            else:
                self.free_link[p] = trash_encode(head, p)
        else:
            self.free_link[p] = self.first_free
        self.first_free = p
        self.live_count -= 1

    def allocate_many(self, count: int) -> list[int]:
        """Allocate ``count`` nodes with a single head read/write when the
        free list already holds that many; observable result is the same
        as ``count`` single allocations."""
        assert count >= 1
        out = []
        p = self.first_free
        while len(out) < count and p != self.invalid and p < self.capacity:
            out.append(p)
            p = self._next_free_of(p)
        if len(out) == count:
            self.first_free = p
            self.live_count += count
            if self.debug:
                self._free_set.difference_update(out)
            return out
        # too few chained slots: fall back to one-by-one (may grow);
        # roll back cleanly if the pool cannot satisfy the request
        out = []
        try:
            for _ in range(count):
                out.append(self.allocate())
        except PoolExhausted:
            for p in reversed(out):
                self.deallocate(p)
            raise
        return out

    def free_list_slots(self) -> list[int]:
        """Free slots in list order (diagnostics and tests)."""
        out = []
        p = self.first_free
        while p != self.invalid and p < self.capacity:
            out.append(p)
            p = self._next_free_of(p)
        return out


@dataclass(frozen=True)
class CapacityModel:
    """Worst-case node-count and memory model for a trie shape."""

    geo: TrieGeometry
    width: int = 32

    @property
    def node_size_bytes(self) -> int:
        return NODE_BYTES[self.width]

    @property
    def addressable(self) -> int:
        return (1 << self.width) - 2


def capacity_bound_for_size(size: int, model: CapacityModel) -> int:
    """Upper bound on nodes needed to hold ``size`` elements.

    Level 0 holds at most one node (the root), level 1 at most
    2**root_bits, and each further level at most fanout times the level
    above; no level can exceed ``size`` nodes.
    """
    assert size >= 0
    geo = model.geo
    total = 0
    level = min(size, 1)
    for depth in range(geo.levels):
        if depth == 1:
            level = min(size, 1 << geo.root_bits)
        elif depth >= 2:
            level = min(size, level * geo.fanout)
        total += level
    return total


def max_size_for_capacity(capacity: int, model: CapacityModel) -> int:
    """Largest element count whose node bound fits ``capacity``.

    Binary search over the monotone bound; the answer never exceeds the
    full key space.
    """
    assert capacity >= 0
    lo, hi = 0, 1 << model.geo.key_bits
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if capacity_bound_for_size(mid, model) <= capacity:
            lo = mid
        else:
            hi = mid - 1
    return lo
