from __future__ import annotations

import random

import pytest

from glasstrie.errors import ConfigError, NegativeAmount, PriceTooFar
from glasstrie.oracle import OracleBook, fuzz_orderbook, gen_book_ops
from glasstrie.orderbook import MAX_SIDE, MIN_SIDE, OrderBook


def make(side=MIN_SIDE, max_size=4, window=None, key_bits=16):
    window = window or min(25, max_size - 1)
    return OrderBook(side, max_size=max_size, best_window=window,
                     key_bits=key_bits, chunk_bits=4, width=16)


class TestInit:
    def test_empty_book(self):
        book = make()
        assert book.best() is None
        assert len(book) == 0

    def test_min_side_orders_ascending(self):
        book = make(MIN_SIDE, max_size=8)
        for p in (30, 10, 20):
            book.adjust(p, 5)
        assert book.best() == 10
        assert book.better(10, 20)

    def test_max_side_orders_descending(self):
        book = make(MAX_SIDE, max_size=8)
        for p in (30, 10, 20):
            book.adjust(p, 5)
        assert book.best() == 30
        assert book.better(30, 20)

    def test_window_must_fit(self):
        with pytest.raises(ConfigError):
            OrderBook(MIN_SIDE, max_size=4, best_window=4, key_bits=16,
                      chunk_bits=4, width=16)


class TestAdjust:
    def test_creates_level(self):
        book = make(max_size=8)
        book.adjust(100, 5)
        assert book.find(100) == 5

    def test_zero_amount_deletes(self):
        book = make(max_size=8)
        book.adjust(100, 5)
        book.adjust(100, -5)
        assert book.find(100) is None
        assert len(book) == 0

    def test_accumulates(self):
        book = make(max_size=8)
        book.adjust(100, 5)
        book.adjust(100, 3)
        assert book.find(100) == 8

    def test_negative_amount_rejected(self):
        book = make(max_size=8)
        book.adjust(100, 5)
        with pytest.raises(NegativeAmount):
            book.adjust(100, -6)
        assert book.find(100) == 5  # state preserved


class TestPreemption:
    def test_ascending_overflow_sets_threshold(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 5):
            book.adjust(p, 10)
        assert sorted(book.glass.keys()) == [1, 2, 3, 4]
        assert dict(book.overflow) == {5: 10}
        assert book.threshold == 5
        book.check_invariants()

    def test_better_price_when_full_preempts_itself(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (10, 20, 30, 40):
            book.adjust(p, 1)
        book.adjust(5, 1)  # better than all, but the glass is full
        assert 5 in book.overflow
        assert book.threshold == 5
        book.check_invariants()

    def test_worse_price_goes_to_overflow(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 50):
            book.adjust(p, 1)
        before = book.threshold
        book.adjust(60, 1)
        assert 60 in book.overflow
        assert book.threshold == before

    def test_find_and_erase_route_to_overflow(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 5, 6):
            book.adjust(p, p * 10)
        assert book.find(5) == 50
        book.adjust(5, -50)
        assert book.find(5) is None
        assert book.find(6) == 60
        book.check_invariants()

    def test_draining_overflow_clears_threshold(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 5):
            book.adjust(p, 1)
        book.adjust(5, -1)
        assert book.threshold is None
        assert not book.overflow
        book.check_invariants()


class TestRestructure:
    def test_best_triggers_when_glass_drains(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 5, 6):
            book.adjust(p, 1)
        for p in (1, 2, 3, 4):
            book.adjust(p, -1)
        assert book.glass.size == 0 and book.overflow
        assert book.best() == 5
        assert book.glass.size == 2  # both former-overflow levels moved
        assert book.threshold is None
        book.check_invariants()

    def test_partial_move_keeps_best_remaining_as_threshold(self):
        book = make(MIN_SIDE, max_size=4)
        for p in range(1, 41):
            book.adjust(p, 1)
        for p in (1, 2, 3):
            book.adjust(p, -1)
        assert book.best() == 4
        assert book.next_best_after(4) == 5  # restructure refilled
        book.check_invariants()
        assert book.glass.size == 4
        assert book.threshold == min(book.overflow)

    def test_full_glass_rejects_far_query(self):
        book = make(MIN_SIDE, max_size=4)
        for p in (1, 2, 3, 4, 5):
            book.adjust(p, 1)
        with pytest.raises(PriceTooFar):
            book.next_best_after(4)  # sought rank equals capacity

    def test_restructure_moves_all_when_room(self):
        book = make(MIN_SIDE, max_size=4)
        book.threshold = 100
        book.overflow.update({100: 1, 101: 1, 102: 1})
        book.restructure()
        assert sorted(book.glass.keys()) == [100, 101, 102]
        assert book.threshold is None and not book.overflow


class TestQueries:
    def test_next_best_after(self):
        book = make(MIN_SIDE, max_size=8)
        for p in (1, 5, 9):
            book.adjust(p, 1)
        assert book.next_best_after(1) == 5
        assert book.next_best_after(9) is None

    def test_iterate_small_book(self):
        book = make(MIN_SIDE, max_size=32, window=25)
        for p in (7, 3, 11):
            book.adjust(p, p)
        assert book.iterate_best(25) == [(3, 3), (7, 7), (11, 11)]

    def test_iterate_depth_capped_by_window(self):
        book = make(MIN_SIDE, max_size=8, window=3)
        with pytest.raises(ConfigError):
            book.iterate_best(4)

    def test_iterate_across_restructure(self):
        book = make(MIN_SIDE, max_size=4, window=3)
        for p in range(1, 12):
            book.adjust(p, 1)
        for p in (1, 2, 3, 4):
            book.adjust(p, -1)
        assert book.iterate_best(3) == [(5, 1), (6, 1), (7, 1)]
        book.check_invariants()


class TestSideSymmetry:
    def test_mirrored_books_agree(self):
        big = (1 << 16) - 1
        lo = OrderBook(MIN_SIDE, max_size=8, best_window=5, key_bits=16,
                       chunk_bits=4, width=16)
        hi = OrderBook(MAX_SIDE, max_size=8, best_window=5, key_bits=16,
                       chunk_bits=4, width=16)
        rng = random.Random(21)
        prices = {}
        for _ in range(3000):
            p = rng.randrange(1, big)
            if p in prices and rng.random() < 0.5:
                delta = -prices.pop(p)
            else:
                delta = rng.randint(1, 9)
                prices[p] = prices.get(p, 0) + delta
            lo.adjust(p, delta)
            hi.adjust(big - p, delta)
            lo_best, hi_best = lo.best(), hi.best()
            assert (lo_best is None) == (hi_best is None)
            if lo_best is not None:
                assert hi_best == big - lo_best
        lo_levels = lo.iterate_best(5)
        hi_levels = hi.iterate_best(5)
        assert [(big - p, a) for p, a in lo_levels] == hi_levels


class TestOracleFuzz:
    @pytest.mark.parametrize("side", [MIN_SIDE, MAX_SIDE])
    @pytest.mark.parametrize("max_size", [4, 64])
    def test_stream_matches_oracle(self, side, max_size):
        book = make(side, max_size=max_size, key_bits=20)
        ops = gen_book_ops(seed=hash((side, max_size)) & 0xFFFF, length=8000)
        trips = fuzz_orderbook(book, side, ops, check_every=1)
        if max_size == 4:
            assert trips > 0  # tiny glass must exercise the guard

    def test_oracle_book_self_check(self):
        ob = OracleBook("min")
        ob.adjust(5, 2)
        ob.adjust(3, 1)
        assert ob.best() == 3
        assert ob.rank(5) == 1
        assert ob.iterate_best(2) == [(3, 1), (5, 2)]
        ob.adjust(3, -1)
        assert ob.best() == 5
