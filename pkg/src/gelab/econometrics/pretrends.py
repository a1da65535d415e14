"""Pre-intervention trend comparison between treated and control groups.

Fits group-specific linear time trends to the log outcome over the
pre-period and tests whether the slopes differ; also emits weekly group
means for plotting.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date

import numpy as np
import pandas as pd
from scipy import stats

from gelab.econometrics.errors import InsufficientSupport, WindowTooShort
from gelab.econometrics.index import week_start_of
from gelab.panel import Panel

Z95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class PretrendsResult:
    slope_diff: float  # treated minus control trend, log points per week
    se: float
    p_value: float
    n_obs: int
    n_weeks: int
    weekly_means: pd.DataFrame  # columns: group, week_start, mean_log_outcome, n

    @property
    def parallel_at_5pct(self) -> bool:
        return self.p_value >= 0.05

    def to_dict(self) -> dict:
        return {
            "design": "pretrends",
            "slope_diff": self.slope_diff,
            "se": self.se,
            "p_value": self.p_value,
            "ci_low": self.slope_diff - Z95 * self.se,
            "ci_high": self.slope_diff + Z95 * self.se,
            "n_obs": self.n_obs,
            "n_weeks": self.n_weeks,
        }


def pretrends_test(
    panel: Panel,
    treated: frozenset[str] | set[str],
    control: frozenset[str] | set[str],
    pre_window: tuple[Date, Date],
    outcome: str = "price",
) -> PretrendsResult:
    if outcome not in ("price", "volume"):
        raise ValueError(f"outcome must be 'price' or 'volume', got {outcome!r}")
    start, end = pre_window
    rows = []
    for obs in panel.observations:
        if not start <= obs.date <= end:
            continue
        if obs.item_id in treated:
            group = 1.0
        elif obs.item_id in control:
            group = 0.0
        else:
            continue
        value = obs.price if outcome == "price" else obs.volume
        if value <= 0:
            continue
        rows.append(
            {
                "group": group,
                "weeks": (obs.date - start).days / 7.0,
                "week_start": week_start_of(obs.date, start),
                "y": np.log(value),
            }
        )
    if not rows:
        raise InsufficientSupport("no usable observations in the pre-window")
    df = pd.DataFrame(rows)
    n_weeks = df["week_start"].nunique()
    if n_weeks < 3:
        raise WindowTooShort(f"pre-window spans {n_weeks} weeks; need >= 3")
    if df["group"].nunique() < 2:
        raise InsufficientSupport("need observations in both groups")

    X = np.column_stack(
        [
            np.ones(len(df)),
            df["weeks"].to_numpy(),
            df["group"].to_numpy(),
            (df["group"] * df["weeks"]).to_numpy(),
        ]
    )
    y = df["y"].to_numpy()
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < 4:
        raise InsufficientSupport("collinear design; widen the pre-window")
    resid = y - X @ beta
    bread = np.linalg.inv(X.T @ X)
    meat = X.T @ (X * (resid**2)[:, None])
    n, k = X.shape
    cov = bread @ meat @ bread * (n / (n - k))

    slope_diff = float(beta[3])
    se = float(np.sqrt(cov[3, 3]))
    p = float(2.0 * stats.norm.sf(abs(slope_diff) / se)) if se > 0 else (
        1.0 if slope_diff == 0 else 0.0
    )

    weekly = (
        df.groupby(["group", "week_start"])["y"]
        .agg(["mean", "size"])
        .reset_index()
        .rename(columns={"mean": "mean_log_outcome", "size": "n"})
    )
    weekly["group"] = np.where(weekly["group"] > 0.5, "treated", "control")

    return PretrendsResult(
        slope_diff=slope_diff,
        se=se,
        p_value=p,
        n_obs=n,
        n_weeks=n_weeks,
        weekly_means=weekly,
    )
