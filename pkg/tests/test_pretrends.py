from datetime import date, timedelta

import numpy as np
import pytest

from gelab.econometrics import pretrends_test
from gelab.econometrics.errors import InsufficientSupport, WindowTooShort
from gelab.panel import Panel

START = date(2021, 11, 1)
PRE_WINDOW = (START, START + timedelta(days=34))  # 5 weeks
TREATED = frozenset({"t0", "t1", "t2"})
CONTROL = frozenset({"c0", "c1", "c2"})


def build_panel(treated_extra_slope=0.0, sigma=0.0, n_days=35, seed=3, base_sd=0.0):
    rng = np.random.default_rng(seed)
    rows = []
    for item in sorted(TREATED | CONTROL):
        slope = 0.02 + (treated_extra_slope if item in TREATED else 0.0)
        base = 11.0 + base_sd * rng.standard_normal()
        for d in range(n_days):
            logp = base + slope * (d / 7.0) + sigma * rng.standard_normal()
            rows.append((item, START + timedelta(days=d), float(np.exp(logp)), 10.0))
    return Panel.from_records(rows)


def test_common_trend_gives_zero_slope_diff():
    result = pretrends_test(build_panel(), TREATED, CONTROL, PRE_WINDOW)
    assert result.slope_diff == pytest.approx(0.0, abs=1e-10)


def test_common_trend_with_noise_is_parallel():
    result = pretrends_test(build_panel(sigma=0.01), TREATED, CONTROL, PRE_WINDOW)
    assert result.parallel_at_5pct


def test_planted_divergence_detected():
    result = pretrends_test(
        build_panel(treated_extra_slope=0.01, sigma=0.005), TREATED, CONTROL, PRE_WINDOW
    )
    assert result.slope_diff == pytest.approx(0.01, abs=0.003)
    assert result.p_value < 0.01
    assert not result.parallel_at_5pct


def test_size_under_null():
    rejections = 0
    reps = 200
    for rep in range(reps):
        panel = build_panel(sigma=0.02, seed=1000 + rep)
        result = pretrends_test(panel, TREATED, CONTROL, PRE_WINDOW)
        rejections += result.p_value < 0.05
    assert rejections / reps <= 0.12


def test_weekly_means_table():
    result = pretrends_test(build_panel(), TREATED, CONTROL, PRE_WINDOW)
    weekly = result.weekly_means
    assert set(weekly.columns) == {"group", "week_start", "mean_log_outcome", "n"}
    assert set(weekly["group"]) == {"treated", "control"}
    assert result.n_weeks == 5
    # 3 items x 7 days per group-week cell
    assert (weekly["n"] == 21).all()


def test_short_window_raises():
    with pytest.raises(WindowTooShort):
        pretrends_test(
            build_panel(n_days=10), TREATED, CONTROL, (START, START + timedelta(days=9))
        )


def test_missing_group_raises():
    with pytest.raises(InsufficientSupport):
        pretrends_test(build_panel(), frozenset({"absent"}), CONTROL, PRE_WINDOW)


def test_bad_outcome_rejected():
    with pytest.raises(ValueError):
        pretrends_test(build_panel(), TREATED, CONTROL, PRE_WINDOW, outcome="turnover")
