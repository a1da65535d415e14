"""Sharp regression discontinuity in log trading volume at a price cutoff.

Two local polynomials are fit on either side of the cutoff; the estimate is
the gap between their fitted values at the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from typing import Optional

import numpy as np
from scipy import stats

from gelab.econometrics.errors import InsufficientSupport
from gelab.econometrics.localpoly import LocalPolyFit, local_poly_fit
from gelab.panel import Panel

Z95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class RdSpec:
    cutoff: float = 100.0
    bandwidth: float = 20.0
    order: int = 1
    kernel: str = "triangular"
    date_window: Optional[tuple[Date, Date]] = None

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")


@dataclass(frozen=True)
class RdEstimate:
    effect: float  # gap in log volume at the cutoff
    se: float
    ci_low: float
    ci_high: float
    n_left: int
    n_right: int
    dropped_zero_volume: int
    spec: RdSpec

    @property
    def p_value(self) -> float:
        if self.se == 0.0:
            return 0.0 if self.effect != 0.0 else 1.0
        return float(2.0 * stats.norm.sf(abs(self.effect) / self.se))

    def to_dict(self) -> dict:
        return {
            "design": "rd",
            "effect": self.effect,
            "se": self.se,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "p_value": self.p_value,
            "n_left": self.n_left,
            "n_right": self.n_right,
            "dropped_zero_volume": self.dropped_zero_volume,
            "spec": {
                "cutoff": self.spec.cutoff,
                "bandwidth": self.spec.bandwidth,
                "order": self.spec.order,
                "kernel": self.spec.kernel,
                "date_window": [str(d) for d in self.spec.date_window]
                if self.spec.date_window
                else None,
            },
        }


def rd_window_data(panel: Panel, spec: RdSpec) -> tuple[np.ndarray, np.ndarray, int]:
    """Prices and log volumes within the bandwidth and date window.

    Zero-volume rows are dropped (their count is the third return value)
    since the outcome is log volume.
    """
    prices, logv, dropped = [], [], 0
    lo, hi = spec.cutoff - spec.bandwidth, spec.cutoff + spec.bandwidth
    for obs in panel.observations:
        if spec.date_window is not None and not (
            spec.date_window[0] <= obs.date <= spec.date_window[1]
        ):
            continue
        if not lo <= obs.price <= hi:
            continue
        if obs.volume <= 0:
            dropped += 1
            continue
        prices.append(obs.price)
        logv.append(np.log(obs.volume))
    return np.array(prices), np.array(logv), dropped


def rd_estimate(panel: Panel, spec: RdSpec = RdSpec()) -> RdEstimate:
    x, y, dropped = rd_window_data(panel, spec)
    if x.size == 0:
        raise InsufficientSupport("no observations within bandwidth and date window")
    left = _fit(x, y, spec, "left")
    right = _fit(x, y, spec, "right")
    effect = right.intercept - left.intercept
    se = float(np.sqrt(left.cov[0, 0] + right.cov[0, 0]))
    return RdEstimate(
        effect=effect,
        se=se,
        ci_low=effect - Z95 * se,
        ci_high=effect + Z95 * se,
        n_left=left.n,
        n_right=right.n,
        dropped_zero_volume=dropped,
        spec=spec,
    )


def _fit(x: np.ndarray, y: np.ndarray, spec: RdSpec, side: str) -> LocalPolyFit:
    return local_poly_fit(
        x,
        y,
        center=spec.cutoff,
        bandwidth=spec.bandwidth,
        order=spec.order,
        kernel=spec.kernel,
        side=side,
    )
