"""Deterministic order-matched market with tax and item-sink policies.

A Market instance is a single logical owner: all mutating calls are expected
to be serialized on it. Snapshots (trade log, summaries) are plain data and
may be shared freely.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from datetime import date as Date, timedelta
from pathlib import Path
from typing import Iterable, Optional

from gelab.exchange.book import ItemBook
from gelab.exchange.errors import (
    BuyLimitExceeded,
    InsufficientFunds,
    InsufficientInventory,
    OrderSlotsExhausted,
    UnknownItemId,
    UnknownOrder,
)
from gelab.exchange.types import (
    Coffer,
    ItemSpec,
    Order,
    Removal,
    SINK_PLAYER_ID,
    Side,
    SinkPolicy,
    TaxSchedule,
    Trade,
)
from gelab.panel import PanelObservation

BUY_LIMIT_WINDOW_HOURS = 4.0


@dataclass
class Player:
    player_id: str
    gp: int = 0
    inventory: dict[str, int] = field(default_factory=dict)

    def holding(self, item_id: str) -> int:
        return self.inventory.get(item_id, 0)


class Market:
    def __init__(
        self,
        items: Iterable[ItemSpec],
        tax: Optional[TaxSchedule] = None,
        base_date: Date = Date(2021, 8, 1),
        slots_per_player: int = 8,
    ):
        self.items: dict[str, ItemSpec] = {}
        for spec in items:
            if spec.id in self.items:
                raise ValueError(f"duplicate item id {spec.id}")
            self.items[spec.id] = spec
        self.tax = tax
        self.base_date = base_date
        self.slots_per_player = slots_per_player
        self.coffer = Coffer()
        self.players: dict[str, Player] = {}
        self.books: dict[str, ItemBook] = {i: ItemBook(i) for i in self.items}
        self.trades: list[Trade] = []
        self.removals: list[Removal] = []
        self.clock_hours: float = 0.0
        self._next_order_id = 1
        self._next_seq = 1
        self._open_orders: dict[int, Order] = {}
        # (player, item) -> recent purchase events (hour, qty), for the buy limit
        self._purchases: dict[tuple[str, str], deque[tuple[float, int]]] = {}

    # -- players and time ---------------------------------------------------

    def add_player(
        self, player_id: str, gp: int = 0, inventory: Optional[dict[str, int]] = None
    ) -> Player:
        if player_id in self.players:
            raise ValueError(f"player {player_id} already exists")
        if gp < 0:
            raise ValueError("starting GP cannot be negative")
        player = Player(player_id, gp, dict(inventory or {}))
        self.players[player_id] = player
        return player

    def advance_to(self, hours: float) -> None:
        if hours < self.clock_hours:
            raise ValueError("market clock cannot move backwards")
        self.clock_hours = hours

    @property
    def current_date(self) -> Date:
        return self.base_date + timedelta(days=int(self.clock_hours // 24))

    # -- order entry --------------------------------------------------------

    def submit_order(
        self, player_id: str, side: Side, item_id: str, limit_price: int, quantity: int
    ) -> list[Trade]:
        """Validate, match against the book, and rest any unfilled remainder.

        Execution always happens at the resting order's limit price; a buy
        taker is refunded its limit minus the execution price, per unit.
        """
        if item_id not in self.items:
            raise UnknownItemId(item_id)
        player = self._player(player_id)
        open_count = sum(
            1 for o in self._open_orders.values() if o.player_id == player_id
        )
        if open_count >= self.slots_per_player:
            raise OrderSlotsExhausted(player_id, open_count)

        order = Order(
            order_id=self._next_order_id,
            player_id=player_id,
            side=side,
            item_id=item_id,
            limit_price=limit_price,
            quantity=quantity,
            remaining=quantity,
            arrival_seq=self._next_seq,
        )

        if side is Side.BUY:
            self._check_buy_limit(player_id, item_id, quantity)
            cost = limit_price * quantity
            if player.gp < cost:
                raise InsufficientFunds(player_id, cost, player.gp)
            player.gp -= cost
            order.escrow_gp = cost
        else:
            have = player.holding(item_id)
            if have < quantity:
                raise InsufficientInventory(player_id, item_id, quantity, have)
            player.inventory[item_id] = have - quantity

        self._next_order_id += 1
        self._next_seq += 1

        trades = (
            self._match_buy(order) if side is Side.BUY else self._match_sell(order)
        )
        if order.remaining > 0:
            self.books[item_id].rest(order)
            self._open_orders[order.order_id] = order
        return trades

    def cancel_order(self, order_id: int) -> None:
        order = self._open_orders.pop(order_id, None)
        if order is None:
            raise UnknownOrder(order_id)
        self.books[order.item_id].remove(order)
        player = self.players[order.player_id]
        if order.side is Side.BUY:
            player.gp += order.escrow_gp
            order.escrow_gp = 0
        else:
            player.inventory[order.item_id] = (
                player.holding(order.item_id) + order.remaining
            )
        order.remaining = 0

    def cancel_all(self, player_id: Optional[str] = None) -> int:
        ids = [
            oid
            for oid, o in self._open_orders.items()
            if player_id is None or o.player_id == player_id
        ]
        for oid in ids:
            self.cancel_order(oid)
        return len(ids)

    # -- matching -----------------------------------------------------------

    def _match_buy(self, order: Order) -> list[Trade]:
        book = self.books[order.item_id]
        trades = []
        buyer = self.players[order.player_id]
        while order.remaining > 0:
            resting = book.best_sell()
            if resting is None or resting.limit_price > order.limit_price:
                break
            qty = min(order.remaining, resting.remaining)
            price = resting.limit_price
            trades.append(
                self._settle(
                    buyer_order=order,
                    seller_order=resting,
                    price=price,
                    qty=qty,
                    buyer_is_taker=True,
                )
            )
            if resting.remaining == 0:
                book.pop_best(Side.SELL)
                del self._open_orders[resting.order_id]
        return trades

    def _match_sell(self, order: Order) -> list[Trade]:
        book = self.books[order.item_id]
        trades = []
        while order.remaining > 0:
            resting = book.best_buy()
            if resting is None or resting.limit_price < order.limit_price:
                break
            qty = min(order.remaining, resting.remaining)
            price = resting.limit_price
            trades.append(
                self._settle(
                    buyer_order=resting,
                    seller_order=order,
                    price=price,
                    qty=qty,
                    buyer_is_taker=False,
                )
            )
            if resting.remaining == 0:
                book.pop_best(Side.BUY)
                del self._open_orders[resting.order_id]
        return trades

    def _settle(
        self,
        buyer_order: Order,
        seller_order: Order,
        price: int,
        qty: int,
        buyer_is_taker: bool,
    ) -> Trade:
        buyer = self.players[buyer_order.player_id]
        seller = self.players[seller_order.player_id]
        gross = price * qty
        tax_unit = self.tax.per_unit(price) if self.tax else 0
        tax_total = tax_unit * qty

        # Buyer escrow holds limit_price per unit; the difference to the
        # execution price goes back to a taker as the refund.
        buyer_order.escrow_gp -= buyer_order.limit_price * qty
        refund = (buyer_order.limit_price - price) * qty if buyer_is_taker else 0
        if buyer_is_taker:
            buyer.gp += refund
        # A resting buyer executes at its own limit; nothing to refund.
        buyer.inventory[buyer_order.item_id] = (
            buyer.holding(buyer_order.item_id) + qty
        )
        seller.gp += gross - tax_total
        self.coffer.credit(tax_total)

        buyer_order.remaining -= qty
        seller_order.remaining -= qty
        self._record_purchase(buyer_order.player_id, buyer_order.item_id, qty)

        trade = Trade(
            date=self.current_date,
            seq=self._next_seq,
            item_id=buyer_order.item_id,
            quantity=qty,
            price=price,
            buyer_id=buyer_order.player_id,
            seller_id=seller_order.player_id,
            buyer_refund=refund,
            tax_paid=tax_total,
        )
        self._next_seq += 1
        self.trades.append(trade)
        return trade

    # -- buy limit ----------------------------------------------------------

    def _purchased_in_window(self, player_id: str, item_id: str) -> int:
        events = self._purchases.get((player_id, item_id))
        if not events:
            return 0
        floor = self.clock_hours - BUY_LIMIT_WINDOW_HOURS
        while events and events[0][0] <= floor:
            events.popleft()
        return sum(q for _, q in events)

    def _pending_buy_quantity(self, player_id: str, item_id: str) -> int:
        return sum(
            o.remaining
            for o in self._open_orders.values()
            if o.player_id == player_id
            and o.item_id == item_id
            and o.side is Side.BUY
        )

    def _check_buy_limit(self, player_id: str, item_id: str, quantity: int) -> None:
        limit = self.items[item_id].buy_limit
        committed = self._purchased_in_window(player_id, item_id)
        pending = self._pending_buy_quantity(player_id, item_id)
        if committed + pending + quantity > limit:
            events = self._purchases.get((player_id, item_id))
            reset = (
                events[0][0] + BUY_LIMIT_WINDOW_HOURS
                if events
                else self.clock_hours
            )
            raise BuyLimitExceeded(player_id, item_id, limit, reset)

    def _record_purchase(self, player_id: str, item_id: str, qty: int) -> None:
        if player_id == SINK_PLAYER_ID:
            return
        self._purchases.setdefault((player_id, item_id), deque()).append(
            (self.clock_hours, qty)
        )

    # -- item sink ----------------------------------------------------------

    def run_sink_day(self, policy: SinkPolicy, date: Optional[Date] = None) -> list[Removal]:
        """Spend coffer GP buying target items at the best resting sell price
        and destroy them, up to the policy's daily maximum per item.

        Purchases stop per item when the daily max is hit, the coffer cannot
        fund the next unit, or no resting sells remain. Sink purchases pay no
        transaction tax (the coffer taxing itself would be a wash).
        """
        date = date or self.current_date
        if not policy.active_on(date):
            return []
        removals = []
        for item_id in sorted(policy.target_items):
            if item_id not in self.items:
                raise UnknownItemId(item_id)
            book = self.books[item_id]
            removed = 0
            while removed < policy.daily_max:
                resting = book.best_sell()
                if resting is None:
                    break
                price = resting.limit_price
                if self.coffer.balance < price:
                    break
                qty = min(policy.daily_max - removed, resting.remaining)
                affordable = self.coffer.balance // price
                qty = min(qty, affordable)
                if qty == 0:
                    break
                self.coffer.debit(price * qty)
                self.players[resting.player_id].gp += price * qty
                resting.remaining -= qty
                if resting.remaining == 0:
                    book.pop_best(Side.SELL)
                    del self._open_orders[resting.order_id]
                removed += qty
                trade = Trade(
                    date=date,
                    seq=self._next_seq,
                    item_id=item_id,
                    quantity=qty,
                    price=price,
                    buyer_id=SINK_PLAYER_ID,
                    seller_id=resting.player_id,
                    buyer_refund=0,
                    tax_paid=0,
                    sink=True,
                )
                self._next_seq += 1
                self.trades.append(trade)
                removal = Removal(date, item_id, qty, price * qty)
                self.removals.append(removal)
                removals.append(removal)
        return removals

    # -- aggregation and ledgers --------------------------------------------

    def daily_summary(self, date: Date) -> list[PanelObservation]:
        """Per-item volume-weighted mean execution price and total quantity
        for one day; items with no trades that day are omitted."""
        totals: dict[str, tuple[int, int]] = {}
        for t in self.trades:
            if t.date != date:
                continue
            gp, qty = totals.get(t.item_id, (0, 0))
            totals[t.item_id] = (gp + t.price * t.quantity, qty + t.quantity)
        return [
            PanelObservation(item_id, date, gp / qty, float(qty))
            for item_id, (gp, qty) in sorted(totals.items())
        ]

    def total_gp(self) -> int:
        """All GP in the system: player balances, buy-order escrow, coffer."""
        escrow = sum(
            o.escrow_gp for o in self._open_orders.values() if o.side is Side.BUY
        )
        return sum(p.gp for p in self.players.values()) + escrow + self.coffer.balance

    def total_items(self) -> dict[str, int]:
        """Per-item counts across all inventories and resting sell orders."""
        counts = {i: 0 for i in self.items}
        for p in self.players.values():
            for item_id, qty in p.inventory.items():
                counts[item_id] += qty
        for o in self._open_orders.values():
            if o.side is Side.SELL:
                counts[o.item_id] += o.remaining
        return counts

    def removed_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.removals:
            counts[r.item_id] = counts.get(r.item_id, 0) + r.quantity
        return counts

    def open_orders(self, player_id: Optional[str] = None) -> list[Order]:
        return [
            o
            for o in self._open_orders.values()
            if player_id is None or o.player_id == player_id
        ]

    # -- export -------------------------------------------------------------

    def trades_to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["date", "seq", "item_id", "qty", "price", "buyer_id", "seller_id", "refund", "tax"]
            )
            for t in self.trades:
                writer.writerow(
                    [
                        t.date.isoformat(),
                        t.seq,
                        t.item_id,
                        t.quantity,
                        t.price,
                        t.buyer_id,
                        t.seller_id,
                        t.buyer_refund,
                        t.tax_paid,
                    ]
                )

    def removals_to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["date", "item_id", "qty", "price_paid"])
            for r in self.removals:
                writer.writerow([r.date.isoformat(), r.item_id, r.quantity, r.price_paid])

    def _player(self, player_id: str) -> Player:
        try:
            return self.players[player_id]
        except KeyError:
            raise KeyError(f"unknown player {player_id}") from None
