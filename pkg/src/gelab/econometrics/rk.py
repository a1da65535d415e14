"""Regression kink in log trading volume at the tax-cap price.

The per-unit tax rises linearly with price (slope = the tax rate) until the
cap, then is flat. The effect of the tax on log volume is identified from
the change in slope of log volume at the kink, rescaled by the known kink
in the tax schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from typing import Optional

import numpy as np
from scipy import stats

from gelab.econometrics.errors import InsufficientSupport
from gelab.econometrics.localpoly import local_poly_fit
from gelab.panel import Panel

Z95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class RkSpec:
    kink: float = 500e6
    lower_restriction: float = 100e6
    tax_slope: float = 0.01  # d(tax)/d(price) below the kink
    order: int = 1
    kernel: str = "triangular"
    date_window: Optional[tuple[Date, Date]] = None
    bandwidth: Optional[float] = None  # default: widest symmetric window allowed

    def __post_init__(self):
        if self.kink <= self.lower_restriction:
            raise ValueError("kink must exceed the lower price restriction")
        if self.tax_slope <= 0:
            raise ValueError("tax_slope must be positive")

    @property
    def effective_bandwidth(self) -> float:
        if self.bandwidth is not None:
            return self.bandwidth
        return self.kink - self.lower_restriction


@dataclass(frozen=True)
class RkEstimate:
    effect: float  # log-volume response per unit of tax slope change
    se: float
    ci_low: float
    ci_high: float
    n_left: int
    n_right: int
    dropped_zero_volume: int
    spec: RkSpec

    @property
    def p_value(self) -> float:
        if self.se == 0.0:
            return 0.0 if self.effect != 0.0 else 1.0
        return float(2.0 * stats.norm.sf(abs(self.effect) / self.se))

    def to_dict(self) -> dict:
        return {
            "design": "rk",
            "effect": self.effect,
            "se": self.se,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "p_value": self.p_value,
            "n_left": self.n_left,
            "n_right": self.n_right,
            "dropped_zero_volume": self.dropped_zero_volume,
            "spec": {
                "kink": self.spec.kink,
                "lower_restriction": self.spec.lower_restriction,
                "tax_slope": self.spec.tax_slope,
                "order": self.spec.order,
                "kernel": self.spec.kernel,
                "bandwidth": self.spec.effective_bandwidth,
                "date_window": [str(d) for d in self.spec.date_window]
                if self.spec.date_window
                else None,
            },
        }


def rk_estimate(panel: Panel, spec: RkSpec = RkSpec()) -> RkEstimate:
    prices, logv, dropped = [], [], 0
    for obs in panel.observations:
        if spec.date_window is not None and not (
            spec.date_window[0] <= obs.date <= spec.date_window[1]
        ):
            continue
        if obs.price <= spec.lower_restriction:
            continue
        if obs.volume <= 0:
            dropped += 1
            continue
        prices.append(obs.price)
        logv.append(np.log(obs.volume))
    if not prices:
        raise InsufficientSupport("no observations above the price restriction")
    x, y = np.array(prices), np.array(logv)

    bw = spec.effective_bandwidth
    left = local_poly_fit(x, y, spec.kink, bw, spec.order, spec.kernel, side="left")
    right = local_poly_fit(x, y, spec.kink, bw, spec.order, spec.kernel, side="right")

    # The tax slope drops from tax_slope to 0 at the kink; divide the
    # outcome's slope change by that first-stage kink.
    effect = (left.slope - right.slope) / spec.tax_slope
    se = float(np.sqrt(left.cov[1, 1] + right.cov[1, 1]) / spec.tax_slope)
    return RkEstimate(
        effect=effect,
        se=se,
        ci_low=effect - Z95 * se,
        ci_high=effect + Z95 * se,
        n_left=left.n,
        n_right=right.n,
        dropped_zero_volume=dropped,
        spec=spec,
    )
