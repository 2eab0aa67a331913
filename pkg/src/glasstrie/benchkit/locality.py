"""Locality analysis of market-event streams.

Two histograms over adjust events: sequential locality bins
|price - previous price| per side, edge locality bins
|price - best price| against the book state at that moment (the book is
rebuilt by replaying the stream). Output is the two-column
``value count`` text format plotting tools eat directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from ..oracle import OracleBook
from .events import ADJUST, ASK, BID, MarketEvent

SEQUENTIAL = "sequential"
EDGE = "edge"


@dataclass
class LocalityHistogram:
    kind: str
    bins: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.bins.items())

    def write(self, path: str):
        with open(path, "w") as f:
            for x, count in self.rows():
                f.write(f"{x} {count}\n")


def locality_histograms(
    events: Iterable[MarketEvent],
) -> tuple[LocalityHistogram, LocalityHistogram]:
    """Sequential and edge locality histograms of an event stream.

    Only adjust events contribute; the first adjust on a side has no
    predecessor and an empty side has no best price, so those events
    are skipped for the respective histogram.
    """
    seq = LocalityHistogram(SEQUENTIAL)
    edge = LocalityHistogram(EDGE)
    last_price: dict[str, int] = {}
    books = {BID: OracleBook("max"), ASK: OracleBook("min")}
    for ev in events:
        if ev.op != ADJUST:
            continue
        side = ev.side
        prev = last_price.get(side)
        if prev is not None:
            seq.bins[abs(ev.price - prev)] += 1
        last_price[side] = ev.price
        best = books[side].best()
        if best is not None:
            edge.bins[abs(ev.price - best)] += 1
        books[side].adjust(ev.price, ev.delta)
    return seq, edge
