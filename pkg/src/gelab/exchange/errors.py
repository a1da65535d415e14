"""Exchange-side error types."""


class ExchangeError(Exception):
    pass


class InsufficientFunds(ExchangeError):
    def __init__(self, player_id: str, needed: int, available: int):
        self.player_id = player_id
        self.needed = needed
        self.available = available
        super().__init__(f"player {player_id} needs {needed} GP, has {available}")


class InsufficientInventory(ExchangeError):
    def __init__(self, player_id: str, item_id: str, needed: int, available: int):
        self.player_id = player_id
        self.item_id = item_id
        self.needed = needed
        self.available = available
        super().__init__(
            f"player {player_id} needs {needed} x {item_id}, has {available}"
        )


class BuyLimitExceeded(ExchangeError):
    """Rolling 4-hour buy limit hit; carries the hour at which the window frees up."""

    def __init__(self, player_id: str, item_id: str, limit: int, window_reset_hour: float):
        self.player_id = player_id
        self.item_id = item_id
        self.limit = limit
        self.window_reset_hour = window_reset_hour
        super().__init__(
            f"player {player_id} over buy limit {limit} for {item_id}; "
            f"window frees at t={window_reset_hour:.2f}h"
        )


class OrderSlotsExhausted(ExchangeError):
    def __init__(self, player_id: str, slots: int):
        self.player_id = player_id
        self.slots = slots
        super().__init__(f"player {player_id} already holds {slots} open orders")


class UnknownOrder(ExchangeError):
    pass


class UnknownItemId(ExchangeError):
    pass
