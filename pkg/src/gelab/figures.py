"""Figure builders for the CLI: turn estimates and panels into SVG charts
plus the plotted-point tables that back them."""

from __future__ import annotations

from datetime import date as Date

import numpy as np
import pandas as pd

from gelab.econometrics.did import DidEstimate, did_frame
from gelab.econometrics.index import PriceIndexSeries, week_start_of
from gelab.econometrics.localpoly import local_poly_fit
from gelab.econometrics.pretrends import PretrendsResult
from gelab.econometrics.rd import RdEstimate, rd_window_data
from gelab.econometrics.rk import RkEstimate
from gelab.panel import Panel
from gelab.svg import Figure

N_BINS = 20


def index_figure(series: PriceIndexSeries) -> tuple[str, pd.DataFrame]:
    table = pd.DataFrame(
        {
            "week_start": [p.week_start for p in series.points],
            "mean_price": [p.mean_price for p in series.points],
            "value": [p.value for p in series.points],
        }
    )
    base = series.base_week_start
    pts = [((p.week_start - base).days, p.value) for p in series.points]
    fig = Figure(title="Price index (base 100)", xlabel="days from base week", ylabel="index")
    fig.line("index", pts)
    fig.vline(0.0)
    return fig.render(), table


def binned_means(x: np.ndarray, y: np.ndarray, n_bins: int = N_BINS) -> pd.DataFrame:
    edges = np.linspace(x.min(), x.max(), n_bins + 1)
    centers, means, counts = [], [], []
    for i in range(n_bins):
        hi_inclusive = i == n_bins - 1
        mask = (x >= edges[i]) & ((x <= edges[i + 1]) if hi_inclusive else (x < edges[i + 1]))
        if mask.sum() == 0:
            continue
        centers.append(0.5 * (edges[i] + edges[i + 1]))
        means.append(float(y[mask].mean()))
        counts.append(int(mask.sum()))
    return pd.DataFrame({"bin_center": centers, "mean_log_volume": means, "n": counts})


def rd_figure(panel: Panel, est: RdEstimate) -> tuple[str, pd.DataFrame]:
    spec = est.spec
    x, y, _ = rd_window_data(panel, spec)
    table = binned_means(x, y)
    left = local_poly_fit(x, y, spec.cutoff, spec.bandwidth, spec.order, spec.kernel, "left")
    right = local_poly_fit(x, y, spec.cutoff, spec.bandwidth, spec.order, spec.kernel, "right")

    fig = Figure(title="Discontinuity at the tax floor", xlabel="price", ylabel="log volume")
    fig.scatter(list(zip(table["bin_center"], table["mean_log_volume"])))
    gl = np.linspace(spec.cutoff - spec.bandwidth, spec.cutoff, 50)
    gr = np.linspace(spec.cutoff, spec.cutoff + spec.bandwidth, 50)
    fig.line("left fit", list(zip(gl, _poly_eval(left.coef, gl - spec.cutoff))), color="#d62728")
    fig.line("right fit", list(zip(gr, _poly_eval(right.coef, gr - spec.cutoff))), color="#d62728")
    fig.vline(spec.cutoff)
    return fig.render(), table


def rk_figure(panel: Panel, est: RkEstimate) -> tuple[str, pd.DataFrame]:
    spec = est.spec
    prices, logv = [], []
    for obs in panel.observations:
        if spec.date_window is not None and not (
            spec.date_window[0] <= obs.date <= spec.date_window[1]
        ):
            continue
        if obs.price > spec.lower_restriction and obs.volume > 0:
            prices.append(obs.price)
            logv.append(np.log(obs.volume))
    x, y = np.array(prices), np.array(logv)
    table = binned_means(x, y)
    bw = spec.effective_bandwidth
    left = local_poly_fit(x, y, spec.kink, bw, spec.order, spec.kernel, "left")
    right = local_poly_fit(x, y, spec.kink, bw, spec.order, spec.kernel, "right")

    fig = Figure(title="Kink at the tax cap", xlabel="price", ylabel="log volume")
    fig.scatter(list(zip(table["bin_center"], table["mean_log_volume"])))
    gl = np.linspace(max(x.min(), spec.kink - bw), spec.kink, 50)
    gr = np.linspace(spec.kink, min(x.max(), spec.kink + bw), 50)
    fig.line("left fit", list(zip(gl, _poly_eval(left.coef, gl - spec.kink))), color="#d62728")
    fig.line("right fit", list(zip(gr, _poly_eval(right.coef, gr - spec.kink))), color="#d62728")
    fig.vline(spec.kink)
    return fig.render(), table


def did_figure(panel: Panel, est: DidEstimate) -> tuple[str, pd.DataFrame]:
    """Weekly group means, the control-implied counterfactual for the treated
    group, and a CI bar for the estimated effect at the implementation date."""
    spec = est.spec
    df, _ = did_frame(panel, spec)
    df["week_start"] = [week_start_of(d, spec.window_start) for d in df["date"]]
    df["logy"] = np.log(df["outcome"])
    weekly = (
        df.groupby(["treated", "week_start"])["logy"].mean().reset_index()
    )
    weekly["group"] = np.where(weekly["treated"] > 0.5, "treated", "control")
    weekly = weekly[["group", "week_start", "logy"]].rename(columns={"logy": "mean_log_outcome"})

    start = spec.window_start
    fig = Figure(
        title=f"DiD on log {spec.outcome}", xlabel="days from window start", ylabel=f"log {spec.outcome}"
    )
    tr = weekly[weekly["group"] == "treated"]
    co = weekly[weekly["group"] == "control"]
    fig.line("treated", [((w - start).days, v) for w, v in zip(tr["week_start"], tr["mean_log_outcome"])])
    fig.line("control", [((w - start).days, v) for w, v in zip(co["week_start"], co["mean_log_outcome"])])

    pre_tr = tr[tr["week_start"] < spec.implementation_date]["mean_log_outcome"]
    pre_co = co[co["week_start"] < spec.implementation_date]["mean_log_outcome"]
    if len(pre_tr) and len(pre_co):
        shift = pre_tr.mean() - pre_co.mean()
        fig.line(
            "counterfactual",
            [((w - start).days, v + shift) for w, v in zip(co["week_start"], co["mean_log_outcome"])],
            color="#444444",
            dashed=True,
        )
        post_tr = tr[tr["week_start"] >= spec.implementation_date]
        if len(post_tr):
            x_bar = (post_tr["week_start"].iloc[-1] - start).days
            anchor = post_tr["mean_log_outcome"].iloc[-1]
            fig.vbar(x_bar, anchor - est.effect + est.ci_low, anchor - est.effect + est.ci_high)
    fig.vline((spec.implementation_date - start).days)
    return fig.render(), weekly


def pretrends_figure(result: PretrendsResult, window_start: Date) -> tuple[str, pd.DataFrame]:
    weekly = result.weekly_means
    fig = Figure(title="Pre-trends", xlabel="days from window start", ylabel="mean log outcome")
    for group in ("treated", "control"):
        sub = weekly[weekly["group"] == group]
        fig.line(
            group,
            [((w - window_start).days, v) for w, v in zip(sub["week_start"], sub["mean_log_outcome"])],
        )
    return fig.render(), weekly


def breaks_figure(series: list[tuple[Date, float]], break_date: Date) -> str:
    pts = sorted(series)
    start = pts[0][0]
    fig = Figure(title="Structural break test", xlabel="days", ylabel="value")
    fig.line("series", [((d - start).days, v) for d, v in pts])
    fig.vline((break_date - start).days)
    return fig.render()


def _poly_eval(coef: np.ndarray, u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u, dtype=float)
    for j, c in enumerate(coef):
        out += c * u**j
    return out
