"""Pairwise price correlations and correlation-screened control sets.

A control item must show no meaningful price correlation (positive or
negative) with any sink-targeted item over the screening window, so that
demand shifts induced by the sink plausibly leave it untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date as Date
from typing import Optional

import numpy as np

from gelab.econometrics.errors import (
    DegenerateSeries,
    EmptyControlSet,
    InsufficientOverlap,
)
from gelab.panel import Panel

MIN_OVERLAP = 3


def price_correlation(
    panel: Panel,
    item_i: str,
    item_k: str,
    window: Optional[tuple[Date, Date]] = None,
) -> float:
    """Pearson correlation of the two items' price series over common dates."""
    si = _series(panel, item_i, window)
    sk = _series(panel, item_k, window)
    common = sorted(si.keys() & sk.keys())
    if len(common) < MIN_OVERLAP:
        raise InsufficientOverlap(
            f"{item_i} and {item_k} share {len(common)} dated observations; "
            f"need >= {MIN_OVERLAP}"
        )
    a = np.array([si[d] for d in common])
    b = np.array([sk[d] for d in common])
    if np.ptp(a) == 0.0:
        raise DegenerateSeries(f"{item_i} has zero price variance over the window")
    if np.ptp(b) == 0.0:
        raise DegenerateSeries(f"{item_k} has zero price variance over the window")
    rho = float(np.corrcoef(a, b)[0, 1])
    return max(-1.0, min(1.0, rho))


@dataclass(frozen=True)
class ControlSetConfig:
    sinked: frozenset[str]
    universe: Optional[frozenset[str]] = None  # default: all items above price_floor
    price_floor: float = 100_000.0
    correlation_threshold: float = 0.1
    window: Optional[tuple[Date, Date]] = None

    def __post_init__(self):
        if not 0.0 < self.correlation_threshold < 1.0:
            raise ValueError("correlation_threshold must lie in (0, 1)")
        if not self.sinked:
            raise ValueError("sinked item set must be nonempty")


@dataclass
class ControlSetResult:
    control: frozenset[str]
    universe: frozenset[str]
    excluded_insufficient_overlap: frozenset[str] = field(default_factory=frozenset)
    excluded_degenerate: frozenset[str] = field(default_factory=frozenset)


def build_control_set(panel: Panel, config: ControlSetConfig) -> ControlSetResult:
    """Items in the universe, outside the sink set, whose absolute price
    correlation with every sinked item is below the threshold.

    Candidates without enough overlapping observations against some sinked
    item (or with a flat price series) are excluded and reported separately.
    """
    universe = config.universe
    if universe is None:
        universe = frozenset(_high_priced_items(panel, config.price_floor, config.window))
    if not config.sinked <= universe:
        universe = universe | config.sinked

    control, no_overlap, degenerate = [], [], []
    for item in sorted(universe - config.sinked):
        try:
            ok = all(
                abs(price_correlation(panel, item, k, config.window))
                < config.correlation_threshold
                for k in sorted(config.sinked)
            )
        except InsufficientOverlap:
            no_overlap.append(item)
            continue
        except DegenerateSeries:
            degenerate.append(item)
            continue
        if ok:
            control.append(item)

    if not control:
        raise EmptyControlSet(
            f"no item passed the |rho| < {config.correlation_threshold} screen"
        )
    return ControlSetResult(
        control=frozenset(control),
        universe=universe,
        excluded_insufficient_overlap=frozenset(no_overlap),
        excluded_degenerate=frozenset(degenerate),
    )


def _series(panel: Panel, item_id: str, window: Optional[tuple[Date, Date]]) -> dict[Date, float]:
    out = {}
    for obs in panel.observations:
        if obs.item_id != item_id:
            continue
        if window is not None and not window[0] <= obs.date <= window[1]:
            continue
        out[obs.date] = obs.price
    return out


def _high_priced_items(
    panel: Panel, floor: float, window: Optional[tuple[Date, Date]]
) -> list[str]:
    sums: dict[str, tuple[float, int]] = {}
    for obs in panel.observations:
        if window is not None and not window[0] <= obs.date <= window[1]:
            continue
        s, n = sums.get(obs.item_id, (0.0, 0))
        sums[obs.item_id] = (s + obs.price, n + 1)
    return [item for item, (s, n) in sums.items() if s / n > floor]
