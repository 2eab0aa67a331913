"""Deterministic synthetic workloads.

Two generators: unique price sequences whose successive differences are
small and nonzero (the shape real feeds have), used to measure single
operations in isolation; and full two-sided market event streams with
price movement concentrated near the touch, used as a stand-in for a
recorded feed.
"""

from __future__ import annotations

import random

from ..oracle import geometric_step
from .events import ADJUST, ASK, BEST, BID, ITER, MarketEvent


def local_price_sequence(
    seed: int,
    count: int,
    key_bits: int = 50,
    start: int | None = None,
    step_p: float = 0.2752,
) -> list[int]:
    """``count`` distinct prices from a small-step random walk.

    Revisited prices are skipped by extending the walk, so successive
    outputs are close but never equal and never repeat an old price.
    """
    rng = random.Random(seed)
    hi = (1 << key_bits) - 1
    price = start if start is not None else hi // 2
    seen = {price}
    out = [price]
    while len(out) < count:
        while True:
            step = geometric_step(rng, step_p)
            if 0 <= price + step <= hi:
                price += step
                break
        if price not in seen:
            seen.add(price)
            out.append(price)
    return out


def absent_neighbors(prices: list[int], key_bits: int = 50) -> list[int]:
    """For each price, a nearby key guaranteed absent from the set.

    Keeps the lookup stream as sequentially local as the insert stream
    while every query misses.
    """
    present = set(prices)
    hi = (1 << key_bits) - 1
    out = []
    for p in prices:
        offset = 1
        while True:
            for q in (p + offset, p - offset):
                if 0 <= q <= hi and q not in present:
                    out.append(q)
                    break
            else:
                offset += 1
                continue
            break
    return out


def market_events(
    seed: int,
    count: int,
    key_bits: int = 50,
    start: int | None = None,
    spread: int = 4,
    levels_target: int = 150,
    iter_depth: int = 25,
    query_rate: float = 0.08,
) -> list[MarketEvent]:
    """Two-sided event stream shaped like recorded feed data.

    A mid price random-walks; adjusts land geometrically close to the
    touch of a random side (edge locality), removals balance additions
    around ``levels_target`` live levels per side, and best/iterate
    queries are sprinkled in at ``query_rate``.
    """
    rng = random.Random(seed)
    hi = (1 << key_bits) - 1
    mid = start if start is not None else hi // 2
    books = {BID: {}, ASK: {}}
    out: list[MarketEvent] = []
    while len(out) < count:
        mid = min(max(mid + geometric_step(rng), spread + 1), hi - spread - 1)
        side = BID if rng.random() < 0.5 else ASK
        book = books[side]
        r = rng.random()
        if r < query_rate / 2:
            out.append(MarketEvent(BEST, side))
            continue
        if r < query_rate:
            out.append(MarketEvent(ITER, side, depth=iter_depth))
            continue
        # price near the touch, on the passive side of the mid
        offset = abs(geometric_step(rng)) - 1
        price = mid - spread - offset if side == BID else mid + spread + offset
        price = min(max(price, 0), hi)
        have = book.get(price, 0)
        crowded = len(book) >= levels_target
        if have and (crowded or rng.random() < 0.45):
            delta = -have if rng.random() < 0.5 else -rng.randint(1, have)
        elif have:
            delta = rng.randint(1, 40)
        elif crowded:
            continue
        else:
            delta = rng.randint(1, 40)
        new_amount = have + delta
        if new_amount:
            book[price] = new_amount
        else:
            del book[price]
        out.append(MarketEvent(ADJUST, side, price, delta))
    return out
