"""Two-group difference-in-differences with item fixed effects.

log(outcome) is regressed on a post-period dummy and its interaction with
treatment status, absorbing item fixed effects by the within transformation.
The interaction coefficient is the average treatment effect on the treated.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date

import numpy as np
import pandas as pd
from scipy import stats

from gelab.econometrics.errors import (
    GroupsOverlap,
    InsufficientSupport,
    NoPostPeriod,
    NoPrePeriod,
)
from gelab.panel import Panel

Z95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class DidSpec:
    treated: frozenset[str]
    control: frozenset[str]
    implementation_date: Date
    window_start: Date
    window_end: Date
    outcome: str = "price"  # "price" or "volume", log-transformed
    cluster_by_item: bool = False

    def __post_init__(self):
        if self.treated & self.control:
            raise GroupsOverlap(
                f"{len(self.treated & self.control)} items appear in both groups"
            )
        if self.outcome not in ("price", "volume"):
            raise ValueError(f"outcome must be 'price' or 'volume', got {self.outcome!r}")
        if not self.window_start <= self.implementation_date <= self.window_end:
            raise ValueError("window must contain the implementation date")


@dataclass(frozen=True)
class DidEstimate:
    effect: float  # coefficient on Post x Treated
    post_coef: float  # coefficient on Post
    se: float
    ci_low: float
    ci_high: float
    n_obs: int
    n_items: int
    outcome_mean: float  # mean of the untransformed outcome over used rows
    dropped_zero_volume: int
    spec: DidSpec

    @property
    def p_value(self) -> float:
        if self.se == 0.0:
            return 0.0 if self.effect != 0.0 else 1.0
        return float(2.0 * stats.norm.sf(abs(self.effect) / self.se))

    def to_dict(self) -> dict:
        return {
            "design": "did",
            "effect": self.effect,
            "post_coef": self.post_coef,
            "se": self.se,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "p_value": self.p_value,
            "n_obs": self.n_obs,
            "n_items": self.n_items,
            "outcome_mean": self.outcome_mean,
            "dropped_zero_volume": self.dropped_zero_volume,
            "spec": {
                "treated": sorted(self.spec.treated),
                "control": sorted(self.spec.control),
                "implementation_date": str(self.spec.implementation_date),
                "window_start": str(self.spec.window_start),
                "window_end": str(self.spec.window_end),
                "outcome": self.spec.outcome,
                "cluster_by_item": self.spec.cluster_by_item,
            },
        }


def did_frame(panel: Panel, spec: DidSpec) -> tuple[pd.DataFrame, int]:
    """Estimation rows: items in either group, dates in the window, with the
    log outcome and Post / Post x Treated regressors. Zero-volume rows are
    dropped when the outcome is volume (count returned alongside)."""
    in_scope = spec.treated | spec.control
    rows, dropped = [], 0
    for obs in panel.observations:
        if obs.item_id not in in_scope:
            continue
        if not spec.window_start <= obs.date <= spec.window_end:
            continue
        value = obs.price if spec.outcome == "price" else obs.volume
        if value <= 0:
            dropped += 1
            continue
        rows.append(
            {
                "item_id": obs.item_id,
                "date": obs.date,
                "outcome": value,
                "post": float(obs.date >= spec.implementation_date),
                "treated": float(obs.item_id in spec.treated),
            }
        )
    df = pd.DataFrame(rows)
    return df, dropped


def did_estimate(panel: Panel, spec: DidSpec) -> DidEstimate:
    df, dropped = did_frame(panel, spec)
    if df.empty:
        raise InsufficientSupport("no usable observations in the DiD window")
    if (df.groupby("treated")["item_id"].nunique() < 2).any() or df["treated"].nunique() < 2:
        raise InsufficientSupport("need >= 2 items in each of treated and control")
    if (df["post"] == 0).sum() == 0:
        raise NoPrePeriod("no observations before the implementation date")
    if (df["post"] == 1).sum() == 0:
        raise NoPostPeriod("no observations on/after the implementation date")

    y = np.log(df["outcome"].to_numpy())
    X = np.column_stack([df["post"].to_numpy(), (df["post"] * df["treated"]).to_numpy()])
    item_codes = pd.factorize(df["item_id"])[0]
    n_items = int(item_codes.max()) + 1

    yt = _demean_within(y, item_codes, n_items)
    Xt = np.column_stack(
        [_demean_within(X[:, j], item_codes, n_items) for j in range(X.shape[1])]
    )

    xtx = Xt.T @ Xt
    beta = np.linalg.solve(xtx, Xt.T @ yt)
    resid = yt - Xt @ beta
    n, k = len(y), X.shape[1]
    df_resid = n - n_items - k

    bread = np.linalg.inv(xtx)
    if spec.cluster_by_item:
        meat = np.zeros((k, k))
        for g in range(n_items):
            idx = item_codes == g
            s = Xt[idx].T @ resid[idx]
            meat += np.outer(s, s)
        # CR1 small-cluster correction
        correction = (n_items / (n_items - 1)) * ((n - 1) / max(df_resid, 1))
        cov = bread @ meat @ bread * correction
    else:
        meat = Xt.T @ (Xt * (resid**2)[:, None])
        cov = bread @ meat @ bread * (n / max(df_resid, 1))

    effect = float(beta[1])
    se = float(np.sqrt(cov[1, 1]))
    return DidEstimate(
        effect=effect,
        post_coef=float(beta[0]),
        se=se,
        ci_low=effect - Z95 * se,
        ci_high=effect + Z95 * se,
        n_obs=n,
        n_items=n_items,
        outcome_mean=float(df["outcome"].mean()),
        dropped_zero_volume=dropped,
        spec=spec,
    )


def _demean_within(v: np.ndarray, codes: np.ndarray, n_groups: int) -> np.ndarray:
    sums = np.bincount(codes, weights=v, minlength=n_groups)
    counts = np.bincount(codes, minlength=n_groups)
    return v - (sums / counts)[codes]
