"""Per-item resting-order book with price priority and arrival-time tie-break."""

from __future__ import annotations

import bisect
from typing import Optional

from gelab.exchange.types import Order, Side


class ItemBook:
    """Resting buy and sell orders for a single item.

    Buys are kept best-first by (descending price, ascending arrival);
    sells by (ascending price, ascending arrival).
    """

    def __init__(self, item_id: str):
        self.item_id = item_id
        self._buys: list[tuple[tuple[int, int], Order]] = []
        self._sells: list[tuple[tuple[int, int], Order]] = []

    @staticmethod
    def _key(order: Order) -> tuple[int, int]:
        if order.side is Side.BUY:
            return (-order.limit_price, order.arrival_seq)
        return (order.limit_price, order.arrival_seq)

    def _lane(self, side: Side):
        return self._buys if side is Side.BUY else self._sells

    def rest(self, order: Order) -> None:
        lane = self._lane(order.side)
        key = self._key(order)
        idx = bisect.bisect_left([k for k, _ in lane], key)
        lane.insert(idx, (key, order))

    def remove(self, order: Order) -> None:
        lane = self._lane(order.side)
        for i, (_, o) in enumerate(lane):
            if o.order_id == order.order_id:
                lane.pop(i)
                return
        raise KeyError(f"order {order.order_id} not resting in book {self.item_id}")

    def best_buy(self) -> Optional[Order]:
        return self._buys[0][1] if self._buys else None

    def best_sell(self) -> Optional[Order]:
        return self._sells[0][1] if self._sells else None

    def pop_best(self, side: Side) -> Order:
        return self._lane(side).pop(0)[1]

    def resting(self, side: Side) -> list[Order]:
        return [o for _, o in self._lane(side)]

    def crossed(self) -> bool:
        bb, bs = self.best_buy(), self.best_sell()
        return bb is not None and bs is not None and bb.limit_price >= bs.limit_price
