from datetime import date, timedelta

import pytest

from gelab.econometrics import EmptyGroup, ZeroVolumeWeek, price_index, week_start_of
from gelab.panel import Panel

BASE = date(2021, 11, 1)


def two_item_panel(scale=1.0):
    # Both items rise 10% from week 0 to week 1 with equal volume, so the
    # index moves 100 -> 110 exactly.
    rows = [
        ("a", BASE, 100.0 * scale, 10.0),
        ("b", BASE, 200.0 * scale, 10.0),
        ("a", BASE + timedelta(days=7), 110.0 * scale, 10.0),
        ("b", BASE + timedelta(days=7), 220.0 * scale, 10.0),
    ]
    return Panel.from_records(rows)


def test_week_binning():
    assert week_start_of(BASE, BASE) == BASE
    assert week_start_of(BASE + timedelta(days=6), BASE) == BASE
    assert week_start_of(BASE + timedelta(days=7), BASE) == BASE + timedelta(days=7)
    assert week_start_of(BASE - timedelta(days=1), BASE) == BASE - timedelta(days=7)


def test_base_week_is_100_and_week1_is_110():
    series = price_index(two_item_panel(), ["a", "b"], BASE)
    assert series.value_at(BASE) == pytest.approx(100.0, abs=1e-12)
    assert series.value_at(BASE + timedelta(days=7)) == pytest.approx(110.0, abs=1e-9)


def test_scale_invariance():
    v1 = price_index(two_item_panel(), ["a", "b"], BASE).value_at(BASE + timedelta(days=7))
    v3 = price_index(two_item_panel(scale=3.0), ["a", "b"], BASE).value_at(
        BASE + timedelta(days=7)
    )
    assert v3 == pytest.approx(v1, abs=1e-12)


def test_volume_weighting_within_week():
    rows = [
        ("a", BASE, 100.0, 1.0),
        ("a", BASE + timedelta(days=3), 200.0, 3.0),  # same week, heavier
        ("a", BASE + timedelta(days=7), 175.0, 1.0),
    ]
    series = price_index(Panel.from_records(rows), ["a"], BASE)
    assert series.points[0].mean_price == pytest.approx(175.0)
    assert series.value_at(BASE + timedelta(days=7)) == pytest.approx(100.0)


def test_gap_week_raises():
    rows = [
        ("a", BASE, 100.0, 1.0),
        ("a", BASE + timedelta(days=14), 120.0, 1.0),
    ]
    with pytest.raises(ZeroVolumeWeek):
        price_index(Panel.from_records(rows), ["a"], BASE)


def test_missing_base_week_raises():
    rows = [("a", BASE + timedelta(days=7), 100.0, 1.0)]
    with pytest.raises(ZeroVolumeWeek):
        price_index(Panel.from_records(rows), ["a"], BASE)


def test_empty_group_raises():
    with pytest.raises(EmptyGroup):
        price_index(two_item_panel(), [], BASE)
    with pytest.raises(EmptyGroup):
        price_index(two_item_panel(), ["nonexistent"], BASE)
