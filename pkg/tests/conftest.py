from datetime import date

import pytest

from gelab.exchange import ItemSpec, Market, TaxSchedule


@pytest.fixture
def market():
    """Two-item market with tax, two funded players."""
    m = Market(
        [ItemSpec("rune_sword", buy_limit=100), ItemSpec("dragon_axe", buy_limit=8)],
        tax=TaxSchedule(),
        base_date=date(2021, 12, 9),
    )
    m.add_player("buyer", gp=10_000_000)
    m.add_player("seller", inventory={"rune_sword": 1_000, "dragon_axe": 1_000})
    return m


@pytest.fixture
def untaxed_market():
    m = Market([ItemSpec("rune_sword", buy_limit=100)], tax=None)
    m.add_player("buyer", gp=10_000_000)
    m.add_player("seller", inventory={"rune_sword": 1_000})
    return m
