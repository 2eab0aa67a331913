"""One side of a limit order book over a bounded glass.

The glass holds only the best prices. Inserts that would overflow it
are preempted into a plain hash map, guarded by a threshold price: a
price goes to (and is looked up in) the glass exactly when it is
strictly better than the threshold. When a best/next query runs off the
end of the glass while the overflow map is nonempty, a restructure
moves the best overflow levels back into the glass and recomputes the
threshold. Queries never range past the configured best-price window,
so a restructure always finds room; a full glass at that point means
the caller broke the window contract and gets an error.
"""

from __future__ import annotations

import heapq

from .errors import ConfigError, NegativeAmount, PriceTooFar
from .glass import Glass, create

MIN_SIDE = "min"
MAX_SIDE = "max"


class OrderBook:
    """Aggregated price levels for one book side.

    side MIN_SIDE: best price is the lowest (asks);
    side MAX_SIDE: best price is the highest (bids).
    Amounts are positive ints; a level whose amount reaches zero is
    deleted. Single-threaded.
    """

    def __init__(
        self,
        side: str,
        max_size: int = 9000,
        best_window: int = 25,
        key_bits: int = 50,
        chunk_bits: int = 5,
        width: int = 16,
        glass_kwargs: dict | None = None,
    ):
        if side not in (MIN_SIDE, MAX_SIDE):
            raise ConfigError(f"side must be {MIN_SIDE!r} or {MAX_SIDE!r}")
        if not 1 <= best_window < max_size:
            raise ConfigError(
                f"best window {best_window} must be positive and below max size {max_size}"
            )
        self.side = side
        self.max_size = max_size
        self.best_window = best_window
        self.glass: Glass = create(
            key_bits=key_bits,
            chunk_bits=chunk_bits,
            width=width,
            max_size=max_size,
            **(glass_kwargs or {}),
        )
        self.overflow: dict[int, int] = {}
        #: None plays "worse than any real price"
        self.threshold: int | None = None

    # -- side-dependent primitives --------------------------------------

    def better(self, a: int, b: int) -> bool:
        return a < b if self.side == MIN_SIDE else a > b

    def _better_than_threshold(self, price: int) -> bool:
        return self.threshold is None or self.better(price, self.threshold)

    def _glass_best(self) -> int | None:
        it = self.glass.min() if self.side == MIN_SIDE else self.glass.max()
        return None if it is None else it.key

    def _glass_next_worse(self, price: int) -> int | None:
        if self.side == MIN_SIDE:
            return self.glass.next(price)
        return self.glass.prev(price)

    def _overflow_best_n(self, n: int) -> list[tuple[int, int]]:
        items = self.overflow.items()
        if self.side == MIN_SIDE:
            return heapq.nsmallest(n, items)
        return heapq.nlargest(n, items)

    # -- book operations -------------------------------------------------

    def adjust(self, price: int, delta: int):
        """Add ``delta`` to the level at ``price`` (creating or deleting
        the level as needed). The feed guarantees no negative amounts."""
        assert delta != 0
        amount = self.find(price)
        if amount is None:
            amount = 0
            present = False
        else:
            present = True
        new_amount = amount + delta
        if new_amount < 0:
            raise NegativeAmount(
                f"level {price} would go to {new_amount} (corrupt feed)"
            )
        if present:
            self.erase(price)
        if new_amount != 0:
            self.insert(price, new_amount)

    def insert(self, price: int, amount: int):
        """Place a level not currently in the book."""
        if self._better_than_threshold(price):
            if self.glass.size < self.max_size:
                self.glass.insert(price, amount)
            else:
                # preemption: the glass is full, so the new level goes to
                # the overflow map and the threshold drops to its price.
                # Any glass level no longer strictly better than the new
                # threshold must follow it out, or later lookups of those
                # prices would be routed to the overflow map and miss.
                self.overflow[price] = amount
                self.threshold = price
                glass = self.glass
                while True:
                    worst = glass.max() if self.side == MIN_SIDE else glass.min()
                    if worst is None or self.better(worst.key, price):
                        break
                    self.overflow[worst.key] = glass.value_at(worst)
                    glass.erase(worst.key)
        else:
            self.overflow[price] = amount

    def erase(self, price: int):
        if self._better_than_threshold(price):
            self.glass.erase(price)
        else:
            self.overflow.pop(price, None)
            if not self.overflow:
                # keep "overflow nonempty iff threshold set" true, so a
                # later miss against a drained overflow cannot trip a
                # pointless restructure
                self.threshold = None

    def find(self, price: int) -> int | None:
        if self._better_than_threshold(price):
            return self.glass.find(price)
        return self.overflow.get(price)

    def best(self) -> int | None:
        """Best price of the whole book, or None when it is empty."""
        if self.glass.size == 0 and self.threshold is not None:
            self.restructure()
        return self._glass_best()

    def next_best_after(self, price: int) -> int | None:
        """Next worse price after ``price``; only supported within the
        configured best-price window."""
        result = self._glass_next_worse(price)
        if result is None and self.threshold is not None:
            self.restructure()
            result = self._glass_next_worse(price)
        return result

    def restructure(self):
        """Move the best overflow levels into the glass and advance the
        threshold to the best price left behind (or clear it)."""
        available = self.max_size - self.glass.size
        if available == 0:
            raise PriceTooFar(
                "next-best query beyond the reachable window: glass already full"
            )
        batch = self._overflow_best_n(min(available, len(self.overflow)))
        for price, amount in batch:
            self.glass.insert(price, amount)
            del self.overflow[price]
        if self.overflow:
            (best_left, _), = self._overflow_best_n(1)
            self.threshold = best_left
        else:
            self.threshold = None

    def iterate_best(self, depth: int) -> list[tuple[int, int]]:
        """Best ``depth`` levels, best first, as (price, amount) pairs.

        Walks the glass with its own iterators (amounts read straight
        from the iterator slots); a restructure in the middle of the
        walk leaves existing iterators valid, since it only adds levels.
        """
        if depth > self.best_window:
            raise ConfigError(
                f"iteration depth {depth} exceeds best window {self.best_window}"
            )
        if self.best() is None:
            return []
        descending = self.side == MAX_SIDE
        items = self.glass.first_items(depth, descending)
        if len(items) < depth and self.threshold is not None:
            # the glass ran dry mid-window: pull levels back and rewalk
            self.restructure()
            items = self.glass.first_items(depth, descending)
        return items

    # -- introspection ----------------------------------------------------

    def __len__(self) -> int:
        return self.glass.size + len(self.overflow)

    def levels(self) -> list[tuple[int, int]]:
        """Every level, best first (test helper; walks everything)."""
        glass_keys = self.glass.keys()
        if self.side == MAX_SIDE:
            glass_keys.reverse()
        out = [(k, self.glass.find(k)) for k in glass_keys]
        rest = sorted(self.overflow.items(), reverse=self.side == MAX_SIDE)
        return out + rest

    def check_invariants(self):
        """Assert the glass/overflow partition; test harness use."""
        assert self.glass.size <= self.max_size
        assert bool(self.overflow) == (self.threshold is not None)
        glass_keys = self.glass.keys()
        if self.threshold is not None:
            for price in glass_keys:
                assert self.better(price, self.threshold)
            for price in self.overflow:
                assert not self.better(price, self.threshold)
        if glass_keys and self.overflow:
            worst_glass = glass_keys[-1] if self.side == MIN_SIDE else glass_keys[0]
            for price in self.overflow:
                assert self.better(worst_glass, price)
