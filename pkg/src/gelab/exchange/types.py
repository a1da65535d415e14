"""Core exchange domain types: items, orders, trades, and the two policies."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date as Date
from fractions import Fraction
from typing import Optional


class Side(enum.Enum):
    BUY = "buy"
    SELL = "sell"


@dataclass(frozen=True)
class ItemSpec:
    id: str
    name: str = ""
    buy_limit: int = 10_000  # units per rolling 4-hour window
    high_level: bool = False  # average price above 100k GP

    def __post_init__(self):
        if self.buy_limit < 1:
            raise ValueError(f"buy_limit must be >= 1, got {self.buy_limit}")


@dataclass
class Order:
    order_id: int
    player_id: str
    side: Side
    item_id: str
    limit_price: int  # GP per unit
    quantity: int
    remaining: int
    arrival_seq: int
    # GP held back from a buyer until fills settle (limit_price per unfilled unit)
    escrow_gp: int = 0

    def __post_init__(self):
        if self.limit_price < 1:
            raise ValueError("limit_price must be >= 1 GP")
        if self.quantity < 1:
            raise ValueError("quantity must be >= 1")
        if not 0 <= self.remaining <= self.quantity:
            raise ValueError("remaining must be within [0, quantity]")


@dataclass(frozen=True)
class Trade:
    date: Date
    seq: int
    item_id: str
    quantity: int
    price: int  # execution price, GP per unit
    buyer_id: str
    seller_id: str
    buyer_refund: int  # total GP returned to a buy taker (limit - price) * qty
    tax_paid: int  # total GP sent to the coffer
    sink: bool = False  # True when the buyer is the item sink


@dataclass(frozen=True)
class Removal:
    date: Date
    item_id: str
    quantity: int
    price_paid: int


SINK_PLAYER_ID = "__sink__"


@dataclass(frozen=True)
class TaxSchedule:
    """Seller-side transaction tax: rate of the sale price, with a floor
    exemption and an absolute cap, floored to whole GP per unit."""

    exempt_below: int = 100
    rate: Fraction = Fraction(1, 100)
    cap: int = 5_000_000

    def __post_init__(self):
        if not 0 < self.rate < 1:
            raise ValueError("rate must lie in (0, 1)")
        if self.exempt_below >= self.cap / self.rate:
            raise ValueError("exempt_below must be below the cap-attaining price")

    def per_unit(self, price: int) -> int:
        """Tax owed on a single unit sold at `price` GP."""
        if price < 1:
            raise ValueError("price must be >= 1 GP")
        if price < self.exempt_below:
            return 0
        return min(
            (price * self.rate.numerator) // self.rate.denominator, self.cap
        )


def apply_tax(price: int, schedule: TaxSchedule) -> int:
    """Per-unit tax on a sale at `price` GP under `schedule`."""
    return schedule.per_unit(price)


@dataclass(frozen=True)
class SinkPolicy:
    """Coffer-funded buy-and-delete of targeted items, capped per item per day."""

    target_items: frozenset[str]
    daily_max: int
    active_from: Date

    def __post_init__(self):
        if not self.target_items:
            raise ValueError("target_items must be nonempty")
        if self.daily_max < 1:
            raise ValueError("daily_max must be >= 1")

    def active_on(self, date: Date) -> bool:
        return date >= self.active_from


class Coffer:
    """Tax-receipt ledger funding sink purchases; can never go negative."""

    def __init__(self, balance: int = 0):
        if balance < 0:
            raise ValueError("coffer balance cannot be negative")
        self._balance = balance

    @property
    def balance(self) -> int:
        return self._balance

    def credit(self, amount: int) -> None:
        if amount < 0:
            raise ValueError("credit amount must be non-negative")
        self._balance += amount

    def debit(self, amount: int) -> None:
        if amount < 0:
            raise ValueError("debit amount must be non-negative")
        if amount > self._balance:
            raise ValueError(f"coffer underfunded: need {amount}, have {self._balance}")
        self._balance -= amount

    def __repr__(self) -> str:
        return f"Coffer(balance={self._balance})"
