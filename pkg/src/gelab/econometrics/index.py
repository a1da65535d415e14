"""Base-100 volume-weighted price index over weekly bins."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date, timedelta
from typing import Iterable

from gelab.econometrics.errors import EmptyGroup, ZeroVolumeWeek
from gelab.panel import Panel


@dataclass(frozen=True)
class IndexPoint:
    week_start: Date
    mean_price: float  # volume-weighted mean price for the week
    value: float  # index, 100 at the base week


@dataclass
class PriceIndexSeries:
    group: frozenset[str]
    base_week_start: Date
    points: list[IndexPoint]

    def value_at(self, week_start: Date) -> float:
        for p in self.points:
            if p.week_start == week_start:
                return p.value
        raise KeyError(f"no index point for week starting {week_start}")


def week_start_of(date: Date, anchor: Date) -> Date:
    """Start of the 7-day bin containing `date`, with bins anchored at `anchor`."""
    offset = (date - anchor).days
    return anchor + timedelta(days=(offset // 7) * 7)


def price_index(panel: Panel, group: Iterable[str], base_week_start: Date) -> PriceIndexSeries:
    """Weekly volume-weighted mean price for the item group, expressed as a
    base-100 index relative to the week starting at `base_week_start`.

    Weeks are 7-day bins anchored at the base date. Every week between the
    group's first and last observation must have positive total volume.
    """
    group = frozenset(group)
    if not group:
        raise EmptyGroup("empty item group")

    totals: dict[Date, tuple[float, float]] = {}  # week -> (sum p*w, sum w)
    any_obs = False
    for obs in panel.observations:
        if obs.item_id not in group:
            continue
        any_obs = True
        wk = week_start_of(obs.date, base_week_start)
        pw, w = totals.get(wk, (0.0, 0.0))
        totals[wk] = (pw + obs.price * obs.volume, w + obs.volume)
    if not any_obs:
        raise EmptyGroup(f"no observations for group of {len(group)} items")

    weeks = sorted(totals)
    wk = weeks[0]
    while wk <= weeks[-1]:
        if totals.get(wk, (0.0, 0.0))[1] <= 0.0:
            raise ZeroVolumeWeek(wk)
        wk += timedelta(days=7)

    means = {wk: pw / w for wk, (pw, w) in totals.items()}
    if base_week_start not in means:
        raise ZeroVolumeWeek(base_week_start)
    base = means[base_week_start]
    points = [IndexPoint(wk, means[wk], 100.0 * means[wk] / base) for wk in weeks]
    return PriceIndexSeries(group=group, base_week_start=base_week_start, points=points)
