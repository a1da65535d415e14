from gelab.exchange.book import ItemBook
from gelab.exchange.errors import (
    BuyLimitExceeded,
    ExchangeError,
    InsufficientFunds,
    InsufficientInventory,
    OrderSlotsExhausted,
    UnknownItemId,
    UnknownOrder,
)
from gelab.exchange.market import BUY_LIMIT_WINDOW_HOURS, Market, Player
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
    apply_tax,
)

__all__ = [
    "BUY_LIMIT_WINDOW_HOURS",
    "BuyLimitExceeded",
    "Coffer",
    "ExchangeError",
    "InsufficientFunds",
    "InsufficientInventory",
    "ItemBook",
    "ItemSpec",
    "Market",
    "Order",
    "OrderSlotsExhausted",
    "Player",
    "Removal",
    "SINK_PLAYER_ID",
    "Side",
    "SinkPolicy",
    "TaxSchedule",
    "Trade",
    "UnknownItemId",
    "UnknownOrder",
    "apply_tax",
]
