"""Structural-break testing for a dated series: mean and variance shifts.

Known-date mode runs a Chow-type F test for a mean shift plus a two-sample
variance-ratio test, each at half the nominal level (Bonferroni across the
two tests). Scan mode takes the supremum of the Chow statistic over the
interior 70% of candidate dates, with a Bonferroni-adjusted (conservative)
p-value.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from gelab.econometrics.errors import DateOutOfRange, SeriesTooShort

MIN_OBS = 20
SCAN_INTERIOR = 0.70


@dataclass(frozen=True)
class BreakTestResult:
    series_id: str
    mode: str  # "known_date" or "scan"
    break_dates: tuple[Date, ...]
    mean_stat: float
    mean_p: float
    var_stat: Optional[float]  # scan mode tests the mean only
    var_p: Optional[float]
    level: float
    break_detected: bool

    def to_dict(self) -> dict:
        return {
            "design": "breaks",
            "series_id": self.series_id,
            "mode": self.mode,
            "break_dates": [str(d) for d in self.break_dates],
            "mean_stat": self.mean_stat,
            "mean_p": self.mean_p,
            "var_stat": self.var_stat,
            "var_p": self.var_p,
            "level": self.level,
            "break_detected": self.break_detected,
        }


def break_test(
    series: Sequence[tuple[Date, float]],
    known_date: Optional[Date] = None,
    level: float = 0.05,
    series_id: str = "",
) -> BreakTestResult:
    pts = sorted(series)
    n = len(pts)
    if n < MIN_OBS:
        raise SeriesTooShort(f"{n} observations; need >= {MIN_OBS}")
    dates = [d for d, _ in pts]
    values = np.array([v for _, v in pts], dtype=float)

    if known_date is not None:
        split = _split_index(dates, known_date)
        if split < 2 or split > n - 2:
            raise DateOutOfRange(
                f"{known_date} leaves fewer than 2 observations on one side"
            )
        f_mean, p_mean = _chow_mean(values, split)
        f_var, p_var = _variance_ratio(values, split)
        detected = p_mean < level / 2 or p_var < level / 2
        return BreakTestResult(
            series_id=series_id,
            mode="known_date",
            break_dates=(known_date,),
            mean_stat=f_mean,
            mean_p=p_mean,
            var_stat=f_var,
            var_p=p_var,
            level=level,
            break_detected=detected,
        )

    # Scan over the interior 70% of candidate split points.
    margin = (1.0 - SCAN_INTERIOR) / 2.0
    lo = max(2, int(np.floor(n * margin)))
    hi = min(n - 2, int(np.ceil(n * (1.0 - margin))))
    best_f, best_p, best_split = -np.inf, 1.0, lo
    for split in range(lo, hi + 1):
        f, p = _chow_mean(values, split)
        if f > best_f:
            best_f, best_p, best_split = f, p, split
    n_candidates = hi - lo + 1
    p_adj = min(1.0, best_p * n_candidates)
    return BreakTestResult(
        series_id=series_id,
        mode="scan",
        break_dates=(dates[best_split],),
        mean_stat=best_f,
        mean_p=p_adj,
        var_stat=None,
        var_p=None,
        level=level,
        break_detected=p_adj < level,
    )


def _split_index(dates: list[Date], when: Date) -> int:
    """First index whose date is on/after `when`; the break starts there."""
    for i, d in enumerate(dates):
        if d >= when:
            return i
    return len(dates)


def _chow_mean(values: np.ndarray, split: int) -> tuple[float, float]:
    """F test of a mean shift at `split` (constant-only regression)."""
    n = len(values)
    a, b = values[:split], values[split:]
    rss_pooled = float(np.sum((values - values.mean()) ** 2))
    rss_split = float(np.sum((a - a.mean()) ** 2) + np.sum((b - b.mean()) ** 2))
    df2 = n - 2
    if rss_split <= 0:
        return (np.inf, 0.0) if rss_pooled > rss_split else (0.0, 1.0)
    f = (rss_pooled - rss_split) / (rss_split / df2)
    return f, float(stats.f.sf(f, 1, df2))


def _variance_ratio(values: np.ndarray, split: int) -> tuple[float, float]:
    """Two-sided F test of equal variances across the split."""
    a, b = values[:split], values[split:]
    va, vb = float(np.var(a, ddof=1)), float(np.var(b, ddof=1))
    if va == 0.0 and vb == 0.0:
        return 1.0, 1.0
    if vb == 0.0:
        return np.inf, 0.0
    f = va / vb
    dfa, dfb = len(a) - 1, len(b) - 1
    p = 2.0 * min(stats.f.cdf(f, dfa, dfb), stats.f.sf(f, dfa, dfb))
    return f, float(min(1.0, p))
