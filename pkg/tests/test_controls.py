from datetime import date, timedelta

import numpy as np
import pytest

from gelab.econometrics import (
    ControlSetConfig,
    DegenerateSeries,
    EmptyControlSet,
    InsufficientOverlap,
    build_control_set,
    price_correlation,
)
from gelab.panel import Panel

START = date(2021, 11, 1)


def panel_from_matrix(prices: np.ndarray, item_names=None) -> Panel:
    """prices[i, d] -> daily observations with unit volume."""
    n_items, n_days = prices.shape
    names = item_names or [f"item_{i:03d}" for i in range(n_items)]
    rows = [
        (names[i], START + timedelta(days=d), float(prices[i, d]), 1.0)
        for i in range(n_items)
        for d in range(n_days)
    ]
    return Panel.from_records(rows)


class TestCorrelation:
    def test_perfect_positive(self):
        base = np.arange(10.0) + 1.0
        panel = panel_from_matrix(np.vstack([base, 2 * base]))
        assert price_correlation(panel, "item_000", "item_001") == pytest.approx(1.0)

    def test_perfect_negative(self):
        base = np.arange(10.0) + 1.0
        panel = panel_from_matrix(np.vstack([base, 100.0 - base]))
        assert price_correlation(panel, "item_000", "item_001") == pytest.approx(-1.0)

    def test_independent_noise_is_near_zero(self):
        rng = np.random.default_rng(5)
        panel = panel_from_matrix(100.0 + rng.normal(size=(2, 2000)))
        assert abs(price_correlation(panel, "item_000", "item_001")) < 0.1

    def test_common_factor_loading(self):
        # x_i = f + e_i with var(f) = var(e) gives rho = 1/2 in the limit
        rng = np.random.default_rng(9)
        f = rng.normal(size=20_000)
        prices = 100.0 + np.vstack(
            [f + rng.normal(size=f.size), f + rng.normal(size=f.size)]
        )
        panel = panel_from_matrix(prices)
        assert price_correlation(panel, "item_000", "item_001") == pytest.approx(
            0.5, abs=0.03
        )

    def test_insufficient_overlap(self):
        rows = [
            ("a", START, 1.0, 1.0),
            ("a", START + timedelta(days=1), 2.0, 1.0),
            ("b", START, 1.0, 1.0),
            ("b", START + timedelta(days=1), 2.0, 1.0),
        ]
        with pytest.raises(InsufficientOverlap):
            price_correlation(Panel.from_records(rows), "a", "b")

    def test_flat_series_degenerate(self):
        panel = panel_from_matrix(
            np.vstack([np.full(10, 7.0), np.arange(10.0) + 1.0])
        )
        with pytest.raises(DegenerateSeries):
            price_correlation(panel, "item_000", "item_001")


class TestControlSet:
    def build_panel(self, seed=13, n_items=20, n_days=800):
        """Half the universe loads on the sinked item's factor, half does not."""
        rng = np.random.default_rng(seed)
        f = rng.normal(size=n_days)
        prices = np.empty((n_items, n_days))
        prices[0] = 200_000.0 + 1_000.0 * (f + 0.1 * rng.normal(size=n_days))
        for i in range(1, n_items):
            load = 1.0 if i % 2 == 0 else 0.0
            prices[i] = 200_000.0 + 1_000.0 * (
                load * f + rng.normal(size=n_days)
            )
        return panel_from_matrix(prices)

    def test_matches_bruteforce_screen(self):
        panel = self.build_panel()
        sinked = frozenset({"item_000"})
        config = ControlSetConfig(sinked=sinked, correlation_threshold=0.1)
        result = build_control_set(panel, config)

        expected = set()
        for item in panel.items:
            if item in sinked:
                continue
            if abs(price_correlation(panel, item, "item_000")) < 0.1:
                expected.add(item)
        assert set(result.control) == expected
        # the planted loaders should be screened out, the independents kept
        assert "item_002" not in result.control
        assert "item_001" in result.control

    def test_price_floor_restricts_universe(self):
        panel = self.build_panel()
        config = ControlSetConfig(sinked=frozenset({"item_000"}), price_floor=1e9)
        # nothing clears a 1e9 floor, so the universe is just the sinked item
        with pytest.raises(EmptyControlSet):
            build_control_set(panel, config)

    def test_explicit_universe(self):
        panel = self.build_panel()
        config = ControlSetConfig(
            sinked=frozenset({"item_000"}),
            universe=frozenset({"item_000", "item_001", "item_003"}),
        )
        result = build_control_set(panel, config)
        assert result.control <= {"item_001", "item_003"}

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            ControlSetConfig(sinked=frozenset({"a"}), correlation_threshold=1.5)
        with pytest.raises(ValueError):
            ControlSetConfig(sinked=frozenset())
