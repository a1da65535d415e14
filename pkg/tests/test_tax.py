from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gelab.exchange import TaxSchedule, apply_tax

DEFAULT = TaxSchedule()


@pytest.mark.parametrize(
    "price,expected",
    [
        (1, 0),
        (50, 0),
        (99, 0),
        (100, 1),  # inclusive boundary: taxed at exactly 100
        (101, 1),
        (199, 1),
        (200, 2),
        (499_999_999, 4_999_999),
        (500_000_000, 5_000_000),
        (1_000_000_000, 5_000_000),
    ],
)
def test_tax_schedule(price, expected):
    assert apply_tax(price, DEFAULT) == expected


def test_tax_is_floored_to_whole_gp():
    assert apply_tax(150, DEFAULT) == 1
    assert apply_tax(249, DEFAULT) == 2


def test_invalid_price_rejected():
    with pytest.raises(ValueError):
        apply_tax(0, DEFAULT)


def test_invalid_schedules_rejected():
    with pytest.raises(ValueError):
        TaxSchedule(rate=Fraction(0))
    with pytest.raises(ValueError):
        TaxSchedule(rate=Fraction(3, 2))
    with pytest.raises(ValueError):
        TaxSchedule(exempt_below=600_000_000)


def test_custom_schedule():
    schedule = TaxSchedule(exempt_below=10, rate=Fraction(1, 20), cap=50)
    assert apply_tax(9, schedule) == 0
    assert apply_tax(10, schedule) == 0  # floor(0.5)
    assert apply_tax(20, schedule) == 1
    assert apply_tax(10_000, schedule) == 50


@given(st.integers(min_value=1, max_value=10**12))
def test_tax_bounded_by_cap(price):
    assert 0 <= apply_tax(price, DEFAULT) <= DEFAULT.cap


@given(st.integers(min_value=1, max_value=10**10))
def test_tax_monotone(price):
    assert apply_tax(price, DEFAULT) <= apply_tax(price + 1, DEFAULT)
