"""The glass: a trie-based ordered map over fixed-width integer keys.

Supports insert / erase / find / min / max / next / prev plus iterator
stepping, with three optional accelerators that never change observable
results:

* a cached root path to the last inserted key, so a descent can start
  at the deepest ancestor shared with the new key instead of the root;
* a cache table mapping key-prefixes to pre-leaf handles, giving most
  lookups a single hash probe instead of a descent;
* cached min/max iterators in eager or lazy flavors.

Keys are consumed in chunk_bits slices from the most significant end;
nodes on the last level ("pre-leafs") hold one mask bit and one value
slot per possible final chunk, so the conceptual leaf level is never
materialized. An iterator is just (pre-leaf handle, full key).

The hot paths (find, insert, erase) are deliberately flat: pool arrays
and geometry constants are bound to instance attributes once, and the
cache-table probe is inlined rather than routed through CacheTable
methods. The structural behavior is identical to the method-based
plumbing, which the differential fuzz checks feature-by-feature.
"""

from __future__ import annotations

from typing import NamedTuple

from .bitops import DivisionPlan, TrieGeometry, WORD_BITS
from .cachetable import PROBE_LIMIT, CacheTable, _HASH_MULT, _MASK64
from .errors import ConfigError, GlassFull
from .nodepool import CapacityModel, Pool, capacity_bound_for_size, max_size_for_capacity

EAGER = "eager"
LAZY = "lazy"

#: lazy edge-cache marker: the cached iterator was spoiled by an erase
BAD = object()


class Iterator(NamedTuple):
    """Position of one stored element: its pre-leaf and its full key."""

    preleaf: int
    key: int


class CompressedIterator(NamedTuple):
    """Iterator squeezed to a handle plus the key's final chunk; the
    rest of the key is recovered from the pre-leaf's stored prefix."""

    preleaf: int
    low_bits: int


class Glass:
    """Bounded ordered integer map backed by a pooled trie.

    Use :func:`create` unless a preconfigured pool is being injected.
    Values are opaque payloads; ``None`` is reserved to mean "absent".
    A glass instance is single-threaded.
    """

    def __init__(
        self,
        geo: TrieGeometry,
        pool: Pool,
        max_size: int,
        cache_table: bool = True,
        edge_mode: str = EAGER,
    ):
        if edge_mode not in (EAGER, LAZY):
            raise ConfigError(f"edge mode must be eager or lazy, got {edge_mode!r}")
        self.geo = geo
        self.plan = DivisionPlan(geo.chunk_bits)
        self.pool = pool
        self.max_size = max_size
        self.size = 0
        self.root = pool.invalid
        self.edge_mode = edge_mode
        self.table = CacheTable(pool) if cache_table else None
        # cached path: rho[i] is the depth-i ancestor of last_key for
        # i < path_len; entries beyond that are stale, not cleared
        self.last_key = 0
        self.rho = [0] * geo.levels
        self.path_len = 0
        # edge cache: Iterator, None for "empty", or BAD (lazy only)
        self._first = None
        self._last = None
        # instrumentation
        self.descent_steps = 0
        self.jump_depth_sum = 0
        self.jump_count = 0
        # flat bindings for the hot paths (list identities are stable:
        # pool growth extends the arrays in place)
        self._cbits = geo.chunk_bits
        self._key_limit = 1 << geo.key_bits
        self._fanout = geo.fanout
        self._nmask = geo.fanout - 1
        self._levels = geo.levels
        self._lastdepth = geo.levels - 1
        self._prefix_base = geo.bias - (WORD_BITS - geo.key_bits)
        self._invalid = pool.invalid
        self._mask = pool.mask
        self._children = pool.children
        self._values = pool.values
        self._parent = pool.parent
        self._cache_key = pool.cache_key
        self._chain_next = pool.chain_next
        self._heads = self.table.heads if self.table is not None else None
        self._tshift = self.table._shift if self.table is not None else 0

    # -- helpers -------------------------------------------------------

    def _refresh_table_binding(self):
        self._heads = self.table.heads
        self._tshift = self.table._shift

    def _prefix_len(self, k1: int, k2: int) -> int:
        """Shared leading chunks of two keys (the cached-path jump depth)."""
        return (self._prefix_base + WORD_BITS - (k1 ^ k2).bit_length()) // self._cbits

    def _descend_to_preleaf(self, key: int) -> int:
        """Pre-leaf holding ``key``'s slot, or the pool's invalid handle.

        Starts at the deepest cached ancestor shared with the last
        inserted key; falls back to the root. Read-only.
        """
        if self.root == self._invalid:
            return self._invalid
        c_bits = self._cbits
        n_mask = self._nmask
        if self.path_len:
            depth = (self._prefix_base + WORD_BITS
                     - (self.last_key ^ key).bit_length()) // c_bits
            if depth >= self.path_len:
                depth = self.path_len - 1
            node = self.rho[depth]
        else:
            depth = 0
            node = self.root
        self.jump_depth_sum += depth
        self.jump_count += 1
        mask = self._mask
        children = self._children
        fanout = self._fanout
        offset = c_bits * (self._lastdepth - depth)
        last = self._lastdepth
        steps = 0
        while depth < last:
            c = (key >> offset) & n_mask
            if not (mask[node] >> c) & 1:
                self.descent_steps += steps
                return self._invalid
            node = children[node * fanout + c]
            offset -= c_bits
            depth += 1
            steps += 1
        self.descent_steps += steps
        return node

    def _min_from(self, node: int, depth: int, key_prefix: int) -> Iterator:
        mask = self._mask
        children = self._children
        fanout = self._fanout
        c_bits = self._cbits
        offset = c_bits * (self._lastdepth - depth)
        while depth < self._lastdepth:
            m = mask[node]
            c = (m & -m).bit_length() - 1
            key_prefix |= c << offset
            node = children[node * fanout + c]
            offset -= c_bits
            depth += 1
        m = mask[node]
        key_prefix |= (m & -m).bit_length() - 1
        return Iterator(node, key_prefix)

    def _max_from(self, node: int, depth: int, key_prefix: int) -> Iterator:
        mask = self._mask
        children = self._children
        fanout = self._fanout
        c_bits = self._cbits
        offset = c_bits * (self._lastdepth - depth)
        while depth < self._lastdepth:
            c = mask[node].bit_length() - 1
            key_prefix |= c << offset
            node = children[node * fanout + c]
            offset -= c_bits
            depth += 1
        key_prefix |= mask[node].bit_length() - 1
        return Iterator(node, key_prefix)

    # -- core operations ----------------------------------------------

    def insert(self, key: int, value) -> bool:
        """Insert-if-absent. True if inserted, False if already present.

        Raises GlassFull when the key is absent and the map is at its
        configured maximum size. Whether or not anything is inserted,
        the cached path ends up describing this key's location.
        """
        assert 0 <= key < self._key_limit and value is not None
        pool = self.pool
        fanout = self._fanout
        n_mask = self._nmask
        c_bits = self._cbits
        last = self._lastdepth
        rho = self.rho
        mask = self._mask
        children = self._children

        if self.root == self._invalid:
            if self.size >= self.max_size:
                raise GlassFull(f"glass is at its maximum size {self.max_size}")
            nodes = pool.allocate_many(self._levels)
            self.root = nodes[0]
            pool.parent[nodes[0]] = self._invalid
            offset = c_bits * last
            for depth in range(last):
                c = (key >> offset) & n_mask
                node, child = nodes[depth], nodes[depth + 1]
                mask[node] = 1 << c
                children[node * fanout + c] = child
                pool.parent[child] = node
                offset -= c_bits
            preleaf = nodes[last]
            c = key & n_mask
            mask[preleaf] = 1 << c
            self._values[preleaf * fanout + c] = value
            self.size = 1
            rho[: self._levels] = nodes
            self.last_key = key
            self.path_len = self._levels
            it = Iterator(preleaf, key)
            self._first = it
            self._last = it
            if self.table is not None:
                self.table.insert(key >> c_bits, preleaf)
            return True

        # jump to the deepest cached ancestor shared with the new key
        if self.path_len:
            depth = (self._prefix_base + WORD_BITS
                     - (self.last_key ^ key).bit_length()) // c_bits
            if depth >= self.path_len:
                depth = self.path_len - 1
            node = rho[depth]
        else:
            depth = 0
            node = self.root
        self.jump_depth_sum += depth
        self.jump_count += 1
        rho[depth] = node
        offset = c_bits * (last - depth)
        while depth < last:
            c = (key >> offset) & n_mask
            if not (mask[node] >> c) & 1:
                break
            node = children[node * fanout + c]
            offset -= c_bits
            depth += 1
            rho[depth] = node
        else:
            # reached the pre-leaf: the slot bit decides. The descent
            # overwrote rho with this key's ancestors, so the cached
            # path must follow the key even when nothing is inserted.
            self.last_key = key
            self.path_len = self._levels
            c = key & n_mask
            if (mask[node] >> c) & 1:
                return False
            if self.size >= self.max_size:
                raise GlassFull(f"glass is at its maximum size {self.max_size}")
            mask[node] |= 1 << c
            self._values[node * fanout + c] = value
            self.size += 1
            first = self._first
            if first is not BAD and key < first[1]:
                self._first = Iterator(node, key)
            lastit = self._last
            if lastit is not BAD and key > lastit[1]:
                self._last = Iterator(node, key)
            return True

        # descent stopped early; rho[0..depth] already describes this key
        self.last_key = key
        self.path_len = depth + 1
        if self.size >= self.max_size:
            raise GlassFull(f"glass is at its maximum size {self.max_size}")
        # allocate the missing suffix in one batch
        missing = last - depth
        if missing == 1 and pool.first_free != self._invalid and pool.first_free < pool.capacity:
            # single fresh pre-leaf: pop the free-list head inline
            preleaf = pool.first_free
            link = pool.free_link[preleaf]
            if pool.trash_encoding:
                nxt = preleaf + 1 if link == 0 else (self._invalid if link == 1 else link - 2)
            else:
                nxt = link
            pool.first_free = nxt
            pool.live_count += 1
            if pool.debug:
                pool._free_set.discard(preleaf)
            nodes = (preleaf,)
        else:
            nodes = pool.allocate_many(missing)
        c = (key >> offset) & n_mask
        mask[node] |= 1 << c
        children[node * fanout + c] = nodes[0]
        pool.parent[nodes[0]] = node
        offset -= c_bits
        depth += 1
        rho[depth] = nodes[0]
        for i in range(missing - 1):
            c = (key >> offset) & n_mask
            parent, child = nodes[i], nodes[i + 1]
            mask[parent] = 1 << c
            children[parent * fanout + c] = child
            pool.parent[child] = parent
            offset -= c_bits
            depth += 1
            rho[depth] = child
        preleaf = nodes[-1]
        c = key & n_mask
        mask[preleaf] = 1 << c
        self._values[preleaf * fanout + c] = value
        self.size += 1
        self.path_len = self._levels
        first = self._first
        if first is not BAD and key < first[1]:
            self._first = Iterator(preleaf, key)
        lastit = self._last
        if lastit is not BAD and key > lastit[1]:
            self._last = Iterator(preleaf, key)
        table = self.table
        if table is not None:
            table.insert(key >> c_bits, preleaf)
            if table.count > table.bucket_count:
                table.maybe_grow()
                self._refresh_table_binding()
        return True

    def find(self, key: int, _mult=_HASH_MULT, _m64=_MASK64, _limit=PROBE_LIMIT):
        """Stored value for ``key``, or None.

        Resolution order: cache table (when enabled), then a descent
        from the cached path. A definitive table answer never descends.
        (The private defaults bind module constants as locals.)
        """
        heads = self._heads
        if heads is not None:
            key_hi = key >> self._cbits
            p = heads[((key_hi * _mult) & _m64) >> self._tshift]
            inv = self._invalid
            cache_key = self._cache_key
            chain_next = self._chain_next
            probes = 0
            while p != inv and probes < _limit:
                if cache_key[p] == key_hi:
                    c = key & self._nmask
                    if (self._mask[p] >> c) & 1:
                        return self._values[p * self._fanout + c]
                    return None
                p = chain_next[p]
                probes += 1
            if p == inv:
                return None
        preleaf = self._descend_to_preleaf(key)
        if preleaf == self._invalid:
            return None
        c = key & self._nmask
        if (self._mask[preleaf] >> c) & 1:
            return self._values[preleaf * self._fanout + c]
        return None

    def erase(self, key: int) -> bool:
        """Remove ``key``; True if it was present.

        Deallocates the chain of nodes left childless, truncates the
        cached path by the removed chain's overlap with it, and fixes
        the edge cache per its mode.
        """
        inv = self._invalid
        fanout = self._fanout
        mask = self._mask
        preleaf = inv
        heads = self._heads
        if heads is not None:
            key_hi = key >> self._cbits
            p = heads[((key_hi * _HASH_MULT) & _MASK64) >> self._tshift]
            cache_key = self._cache_key
            chain_next = self._chain_next
            probes = 0
            while p != inv and probes < PROBE_LIMIT:
                if cache_key[p] == key_hi:
                    preleaf = p
                    break
                p = chain_next[p]
                probes += 1
            else:
                if p == inv:
                    return False
        if preleaf == inv:
            preleaf = self._descend_to_preleaf(key)
            if preleaf == inv:
                return False
        c = key & self._nmask
        m = mask[preleaf]
        if not (m >> c) & 1:
            return False

        m &= ~(1 << c)
        mask[preleaf] = m
        self._values[preleaf * fanout + c] = None
        self.size -= 1

        # walk up deallocating childless nodes; each removed node is
        # first unlinked from its parent
        removed = 0
        if m == 0:
            pool = self.pool
            parent_arr = self._parent
            children = self._children
            table = self.table
            node = preleaf
            offset = 0
            while True:
                parent = parent_arr[node]
                if node == preleaf and table is not None:
                    table.remove(node)
                pool.deallocate(node)
                removed += 1
                if parent == inv:
                    self.root = inv
                    break
                offset += self._cbits
                pc = (key >> offset) & self._nmask
                pm = mask[parent] & ~(1 << pc)
                mask[parent] = pm
                children[parent * fanout + pc] = inv
                if pm:
                    break
                node = parent

        # cached-path truncation: overlap of the cached path with the
        # removed chain, bounded by the shared-prefix depth
        path_len = self.path_len
        if path_len:
            shared = (self._prefix_base + WORD_BITS
                      - (self.last_key ^ key).bit_length()) // self._cbits
            if shared > path_len:
                shared = path_len
            drop = shared + removed + 1 - self._levels
            if drop > 0:
                self.path_len = path_len - drop if drop < path_len else 0

        if self.size == 0:
            self._first = None
            self._last = None
        else:
            first = self._first
            if first is not BAD and first[1] == key:
                self._first = (
                    self._min_from(self.root, 0, 0) if self.edge_mode == EAGER else BAD
                )
            lastit = self._last
            if lastit is not BAD and lastit[1] == key:
                self._last = (
                    self._max_from(self.root, 0, 0) if self.edge_mode == EAGER else BAD
                )
        return True

    def min(self) -> Iterator | None:
        if self.size == 0:
            return None
        if self._first is BAD:
            self._first = self._min_from(self.root, 0, 0)
        return self._first

    def max(self) -> Iterator | None:
        if self.size == 0:
            return None
        if self._last is BAD:
            self._last = self._max_from(self.root, 0, 0)
        return self._last

    def _neighbor(self, key: int, forward: bool) -> Iterator | None:
        """Strict successor (forward) or predecessor of ``key``; the key
        itself need not be stored."""
        if self.root == self._invalid:
            return None
        fanout = self._fanout
        n_mask = self._nmask
        c_bits = self._cbits
        last = self._lastdepth
        # descend along the key's path as far as it exists
        if self.path_len:
            depth = (self._prefix_base + WORD_BITS
                     - (self.last_key ^ key).bit_length()) // c_bits
            if depth >= self.path_len:
                depth = self.path_len - 1
            node = self.rho[depth]
        else:
            depth = 0
            node = self.root
        mask = self._mask
        children = self._children
        offset = c_bits * (last - depth)
        while depth < last:
            c = (key >> offset) & n_mask
            if not (mask[node] >> c) & 1:
                break
            node = children[node * fanout + c]
            offset -= c_bits
            depth += 1

        # scan this node then climb, bounding each scan by the key's
        # chunk at that level
        parent_arr = self._parent
        word_top = _MASK64 - 1  # (-2) mod 2**64
        while True:
            c = (key >> offset) & n_mask
            if forward:
                m = mask[node] & (word_top << c)
            else:
                m = mask[node] & ((1 << c) - 1)
            if m:
                if forward:
                    branch = (m & -m).bit_length() - 1
                else:
                    branch = m.bit_length() - 1
                above = key & ~((1 << (offset + c_bits)) - 1)
                prefix = above | (branch << offset)
                if depth == last:
                    return Iterator(node, prefix)
                child = children[node * fanout + branch]
                if forward:
                    return self._min_from(child, depth + 1, prefix)
                return self._max_from(child, depth + 1, prefix)
            parent = parent_arr[node]
            if depth == 0 or parent == self._invalid:
                return None
            node = parent
            depth -= 1
            offset += c_bits

    def next(self, key: int) -> int | None:
        """Smallest stored key strictly greater than ``key``, or None."""
        it = self._neighbor(key, True)
        return None if it is None else it[1]

    def prev(self, key: int) -> int | None:
        """Largest stored key strictly less than ``key``, or None."""
        it = self._neighbor(key, False)
        return None if it is None else it[1]

    def iter_next(self, it: Iterator) -> Iterator | None:
        """Successor element of a valid iterator.

        Unlike :meth:`next`, no descent is needed: the iterator already
        holds its pre-leaf, so the step scans that node's mask and only
        climbs parents when the pre-leaf is exhausted.
        """
        return self._step(it, True)

    def iter_prev(self, it: Iterator) -> Iterator | None:
        return self._step(it, False)

    def _step(self, it: Iterator, forward: bool) -> Iterator | None:
        node, key = it
        mask = self._mask
        c = key & self._nmask
        if forward:
            m = mask[node] & ((_MASK64 - 1) << c)
            if m:
                return Iterator(node, key - c + ((m & -m).bit_length() - 1))
        else:
            m = mask[node] & ((1 << c) - 1)
            if m:
                return Iterator(node, key - c + (m.bit_length() - 1))
        # pre-leaf exhausted: climb until a sibling subtree exists
        parent_arr = self._parent
        children = self._children
        fanout = self._fanout
        n_mask = self._nmask
        c_bits = self._cbits
        depth = self._lastdepth
        offset = 0
        while True:
            parent = parent_arr[node]
            if depth == 0 or parent == self._invalid:
                return None
            node = parent
            depth -= 1
            offset += c_bits
            c = (key >> offset) & n_mask
            if forward:
                m = mask[node] & ((_MASK64 - 1) << c)
            else:
                m = mask[node] & ((1 << c) - 1)
            if m:
                if forward:
                    branch = (m & -m).bit_length() - 1
                else:
                    branch = m.bit_length() - 1
                above = key & ~((1 << (offset + c_bits)) - 1)
                prefix = above | (branch << offset)
                child = children[node * fanout + branch]
                if forward:
                    return self._min_from(child, depth + 1, prefix)
                return self._max_from(child, depth + 1, prefix)

    def value_at(self, it: Iterator):
        return self._values[it[0] * self._fanout + (it[1] & self._nmask)]

    def first_items(self, count: int, descending: bool = False) -> list[tuple[int, int]]:
        """Up to ``count`` (key, value) pairs from the ordered end.

        One call walks the whole range with the iterator-stepping logic
        inlined; this is the bulk form of min()/iter_next().
        """
        if count <= 0 or self.size == 0:
            return []
        start = self.max() if descending else self.min()
        node, key = start
        mask = self._mask
        children = self._children
        parent_arr = self._parent
        values = self._values
        fanout = self._fanout
        n_mask = self._nmask
        c_bits = self._cbits
        lastdepth = self._lastdepth
        inv = self._invalid
        word_top = _MASK64 - 1
        out = [(key, values[node * fanout + (key & n_mask)])]
        while len(out) < count:
            c = key & n_mask
            if descending:
                m = mask[node] & ((1 << c) - 1)
            else:
                m = mask[node] & (word_top << c)
            if m:
                if descending:
                    key = key - c + (m.bit_length() - 1)
                else:
                    key = key - c + ((m & -m).bit_length() - 1)
                out.append((key, values[node * fanout + (key & n_mask)]))
                continue
            # climb until a sibling subtree exists, then roll down its edge
            depth = lastdepth
            offset = 0
            up = node
            while True:
                par = parent_arr[up]
                if depth == 0 or par == inv:
                    return out
                up = par
                depth -= 1
                offset += c_bits
                c = (key >> offset) & n_mask
                if descending:
                    m = mask[up] & ((1 << c) - 1)
                else:
                    m = mask[up] & (word_top << c)
                if m:
                    break
            if descending:
                branch = m.bit_length() - 1
            else:
                branch = (m & -m).bit_length() - 1
            key = (key & ~((1 << (offset + c_bits)) - 1)) | (branch << offset)
            up = children[up * fanout + branch]
            depth += 1
            offset -= c_bits
            while depth < lastdepth:
                m = mask[up]
                if descending:
                    c = m.bit_length() - 1
                else:
                    c = (m & -m).bit_length() - 1
                key |= c << offset
                up = children[up * fanout + c]
                offset -= c_bits
                depth += 1
            m = mask[up]
            if descending:
                key |= m.bit_length() - 1
            else:
                key |= (m & -m).bit_length() - 1
            node = up
            out.append((key, values[node * fanout + (key & n_mask)]))
        return out

    # -- compressed iterators -----------------------------------------

    def compress(self, it: Iterator) -> CompressedIterator:
        """Drop all key bits the pre-leaf can reconstruct; requires the
        cache table (it maintains the stored prefixes)."""
        if self.table is None:
            raise ConfigError("compressed iterators require the cache table")
        if self._cbits > 8:
            raise ConfigError("compressed iterators require chunk_bits <= 8")
        return CompressedIterator(it.preleaf, it.key & self._nmask)

    def decompress(self, cit: CompressedIterator) -> Iterator:
        if self.table is None:
            raise ConfigError("compressed iterators require the cache table")
        prefix = self._cache_key[cit.preleaf]
        return Iterator(cit.preleaf, (prefix << self._cbits) | cit.low_bits)

    # -- introspection -------------------------------------------------

    def __len__(self) -> int:
        return self.size

    def keys(self) -> list[int]:
        """All keys in ascending order."""
        return [k for k, _ in self.first_items(self.size)]

    def dump(self) -> str:
        """Deterministic text rendering of the trie for golden tests.

        One line per node, preorder: depth, key-prefix bits, mask, and
        child slots (pre-leafs list stored values instead).
        """
        pool = self.pool
        geo = self.geo
        lines = []

        def walk(node: int, depth: int, prefix: str):
            m = pool.mask[node]
            bits = f"{m:0{geo.fanout}b}"
            label = prefix if prefix else "root"
            if depth == geo.levels - 1:
                slots = ",".join(
                    f"{c}={pool.values[node * geo.fanout + c]!r}"
                    for c in range(geo.fanout)
                    if (m >> c) & 1
                )
                lines.append(f"{depth} {label} mask={bits} values[{slots}]")
                return
            kids = ",".join(str(c) for c in range(geo.fanout) if (m >> c) & 1)
            lines.append(f"{depth} {label} mask={bits} children[{kids}]")
            for c in range(geo.fanout):
                if (m >> c) & 1:
                    walk(
                        pool.children[node * geo.fanout + c],
                        depth + 1,
                        prefix + format(c, f"0{geo.chunk_bits}b"),
                    )

        if self.root != pool.invalid:
            walk(self.root, 0, "")
        return "\n".join(lines)

    def check_integrity(self, deep: bool = True):
        """Walk the whole structure and assert every invariant.

        Test harness use only. The walk itself is O(size); ``deep`` adds
        the cache-table membership and key-prefix reconstruction checks,
        which cost O(size * fanout * levels) and are meant for sampled
        rather than per-op use.
        """
        pool = self.pool
        geo = self.geo
        fanout = geo.fanout
        if self.root == pool.invalid:
            assert self.size == 0
            assert pool.live_count == 0
            return
        seen = set()
        elements = 0
        preleafs = 0
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            assert node not in seen, "cycle in trie"
            seen.add(node)
            m = pool.mask[node]
            assert m != 0, f"childless interior node {node} at depth {depth}"
            if depth == geo.levels - 1:
                preleafs += 1
                for c in range(fanout):
                    if (m >> c) & 1:
                        elements += 1
                        assert pool.values[node * fanout + c] is not None
                    else:
                        assert pool.values[node * fanout + c] is None
                continue
            for c in range(fanout):
                child = pool.children[node * fanout + c]
                if (m >> c) & 1:
                    assert child != pool.invalid
                    assert pool.parent[child] == node
                    stack.append((child, depth + 1))
                else:
                    assert child in (0, pool.invalid), (
                        f"stale child handle under clear bit: node {node} slot {c}"
                    )
        assert elements == self.size
        assert len(seen) == pool.live_count
        # cached path: every valid entry is the true ancestor of last_key
        if self.path_len:
            node = self.root
            assert self.rho[0] == node
            offset = geo.chunk_bits * (geo.levels - 1)
            for i in range(1, self.path_len):
                c = (self.last_key >> offset) & (fanout - 1)
                assert (pool.mask[node] >> c) & 1, f"cached path broken at depth {i}"
                node = pool.children[node * fanout + c]
                assert self.rho[i] == node
                offset -= geo.chunk_bits
        # cache table: one entry per live pre-leaf
        if self.table is not None:
            assert self.table.count == preleafs
            if deep:
                chained = {}
                for b in range(self.table.bucket_count):
                    for p in self.table.chain(b):
                        chained[p] = pool.cache_key[p]
                assert set(chained) == {
                    n for n in seen if self._depth_of(n) == geo.levels - 1
                }
                for p, key_hi in chained.items():
                    lowest = (pool.mask[p] & -pool.mask[p]).bit_length() - 1
                    # reconstructing any stored key must reproduce the prefix
                    assert key_hi == self._key_of_preleaf(p, lowest) >> geo.chunk_bits

    def _depth_of(self, node: int) -> int:
        d = 0
        while self.pool.parent[node] != self.pool.invalid:
            node = self.pool.parent[node]
            d += 1
        return d

    def _key_of_preleaf(self, preleaf: int, slot: int) -> int:
        """Reconstruct a stored key by walking parent links upward."""
        pool = self.pool
        geo = self.geo
        key = slot
        node = preleaf
        offset = geo.chunk_bits
        while pool.parent[node] != pool.invalid:
            parent = pool.parent[node]
            for c in range(geo.fanout):
                if (pool.mask[parent] >> c) & 1 and pool.children[parent * geo.fanout + c] == node:
                    key |= c << offset
                    break
            node = parent
            offset += geo.chunk_bits
        return key


def create(
    key_bits: int,
    chunk_bits: int,
    width: int = 32,
    max_size: int = 0,
    cache_table: bool = True,
    edge_mode: str = EAGER,
    trash_encoding: bool = True,
    preallocate: bool = True,
) -> Glass:
    """Build a glass with a freshly sized pool.

    The pool is capped at the node bound for ``max_size`` (or at what the
    handle width can address, whichever is smaller).
    """
    geo = TrieGeometry(key_bits=key_bits, chunk_bits=chunk_bits)
    model = CapacityModel(geo, width=width)
    if max_size > max_size_for_capacity(model.addressable, model):
        raise ConfigError(
            f"max_size {max_size} cannot fit {width}-bit handles"
        )
    cap = min(model.addressable, capacity_bound_for_size(max_size, model))
    pool = Pool(
        geo,
        width=width,
        max_capacity=cap,
        preallocate=preallocate,
        trash_encoding=trash_encoding,
    )
    return Glass(geo, pool, max_size, cache_table=cache_table, edge_mode=edge_mode)
