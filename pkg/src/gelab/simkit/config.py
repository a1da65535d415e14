"""Scenario and synthetic-panel configuration, with TOML loading.

Configs are plain frozen dataclasses; `ConfigInvalid` carries field-level
diagnostics so the CLI can point at the offending key.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, replace
from datetime import date as Date
from pathlib import Path
from typing import Optional


class ConfigInvalid(ValueError):
    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        msgs = "; ".join(f"{f}: {m}" for f, m in problems)
        super().__init__(f"invalid config: {msgs}")


EFFECT_KINDS = ("rd_step", "rk_slope", "did_level")

# Slope of the per-unit tax in price below its cap; fixes the first-stage
# kink that an rk_slope effect is scaled by.
RK_TAX_SLOPE = 0.01


@dataclass(frozen=True)
class InjectedEffect:
    """Ground-truth effect wired into a data-generating process.

    rd_step: add `magnitude` to log volume where price >= cutoff.
    rk_slope: tilt log volume below the cutoff so the slope change at the
      cutoff equals magnitude * RK_TAX_SLOPE (the kink estimator then
      recovers `magnitude`).
    did_level: add `magnitude` to the log outcome of `items` on/after
      `effect_date`.
    """

    kind: str
    magnitude: float
    cutoff: Optional[float] = None
    items: frozenset[str] = frozenset()
    effect_date: Optional[Date] = None
    outcome: str = "price"

    def __post_init__(self):
        problems = []
        if self.kind not in EFFECT_KINDS:
            problems.append(("kind", f"must be one of {EFFECT_KINDS}"))
        if not (self.magnitude == self.magnitude and abs(self.magnitude) < float("inf")):
            problems.append(("magnitude", "must be finite"))
        if self.kind in ("rd_step", "rk_slope") and self.cutoff is None:
            problems.append(("cutoff", f"required for {self.kind}"))
        if self.kind == "did_level":
            if not self.items:
                problems.append(("items", "required for did_level"))
            if self.effect_date is None:
                problems.append(("effect_date", "required for did_level"))
            if self.outcome not in ("price", "volume"):
                problems.append(("outcome", "must be 'price' or 'volume'"))
        if problems:
            raise ConfigInvalid(problems)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "magnitude": self.magnitude,
            "cutoff": self.cutoff,
            "items": sorted(self.items),
            "effect_date": str(self.effect_date) if self.effect_date else None,
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class SinkRound:
    start_date: Date
    items: tuple[str, ...]
    daily_max: int

    def __post_init__(self):
        if not self.items:
            raise ConfigInvalid([("sink_rounds.items", "must be nonempty")])
        if self.daily_max < 1:
            raise ConfigInvalid([("sink_rounds.daily_max", "must be >= 1")])


@dataclass(frozen=True)
class ScenarioConfig:
    """Agent-based scenario routed through the matching engine."""

    seed: int
    n_items: int = 20
    n_agents: int = 30
    n_days: int = 30
    start_date: Date = Date(2021, 11, 1)
    # item fundamental-value process (log scale, AR(1) around item mean)
    base_log_price_mean: float = 12.0
    base_log_price_sd: float = 0.5
    drift: float = 0.0
    volatility: float = 0.02
    ar1_rho: float = 0.9
    # order flow
    orders_per_item_day: int = 8
    order_qty_max: int = 4
    limit_spread: float = 0.01
    buy_limit: int = 10_000
    # interventions
    tax_start_date: Optional[Date] = None
    sink_rounds: tuple[SinkRound, ...] = ()
    injected_effects: tuple[InjectedEffect, ...] = ()

    def __post_init__(self):
        problems = []
        if self.n_days < 1:
            problems.append(("n_days", "must be >= 1"))
        if self.n_items < 1:
            problems.append(("n_items", "must be >= 1"))
        if self.n_agents < 2:
            problems.append(("n_agents", "must be >= 2 (a buyer and a seller)"))
        if self.orders_per_item_day < 1:
            problems.append(("orders_per_item_day", "must be >= 1"))
        horizon_end = self.end_date
        for i, rnd in enumerate(self.sink_rounds):
            if not self.start_date <= rnd.start_date <= horizon_end:
                problems.append(
                    (f"sink_rounds[{i}].start_date", "outside the simulation horizon")
                )
        if self.tax_start_date is not None and self.tax_start_date > horizon_end:
            problems.append(("tax_start_date", "after the simulation horizon"))
        if problems:
            raise ConfigInvalid(problems)

    @property
    def end_date(self) -> Date:
        from datetime import timedelta

        return self.start_date + timedelta(days=self.n_days - 1)

    def item_ids(self) -> list[str]:
        return [f"item_{i:03d}" for i in range(self.n_items)]

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class SynthConfig:
    """Direct parametric DGP for fast estimator Monte-Carlo runs.

    Item base prices are uniform on [price_min, price_max]; log volume is
    linear in price. Injected effects are applied exactly in the form each
    estimator identifies.
    """

    seed: int
    n_items: int = 100
    n_days: int = 30
    start_date: Date = Date(2021, 12, 1)
    price_min: float = 80.0
    price_max: float = 120.0
    sigma_price: float = 0.0  # lognormal day-to-day jitter on price
    trend_per_day: float = 0.0  # common log-price trend
    treated_items: frozenset[str] = frozenset()
    treated_extra_trend_per_day: float = 0.0  # pre-trend violation knob
    post_step: float = 0.0  # common log-price step at post_step_date
    post_step_date: Optional[Date] = None
    vol_base: float = 5.0
    vol_slope: float = 0.0  # log volume per GP of price
    sigma_vol: float = 0.0
    injected_effects: tuple[InjectedEffect, ...] = ()

    def __post_init__(self):
        problems = []
        if self.n_days < 1:
            problems.append(("n_days", "must be >= 1"))
        if self.n_items < 1:
            problems.append(("n_items", "must be >= 1"))
        if not 0 < self.price_min <= self.price_max:
            problems.append(("price_min/price_max", "need 0 < min <= max"))
        if self.sigma_price < 0 or self.sigma_vol < 0:
            problems.append(("sigma", "noise scales must be non-negative"))
        if self.post_step != 0.0 and self.post_step_date is None:
            problems.append(("post_step_date", "required when post_step != 0"))
        if problems:
            raise ConfigInvalid(problems)

    def item_ids(self) -> list[str]:
        return [f"item_{i:03d}" for i in range(self.n_items)]

    def with_seed(self, seed: int) -> "SynthConfig":
        return replace(self, seed=seed)


# -- TOML loading -----------------------------------------------------------


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    """Read a scenario config from a TOML file.

    Layout: a [scenario] table with ScenarioConfig keys, an optional [tax]
    table with start_date, plus repeated [[sink_rounds]] and [[effects]]
    tables.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    if "scenario" not in raw:
        raise ConfigInvalid([("scenario", "missing [scenario] table")])
    sc = dict(raw["scenario"])
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(sc) - known
    if unknown:
        raise ConfigInvalid([(k, "unknown scenario key") for k in sorted(unknown)])

    kwargs = {k: _coerce_date(v) for k, v in sc.items()}
    if "tax" in raw:
        kwargs["tax_start_date"] = _coerce_date(raw["tax"].get("start_date"))
    kwargs["sink_rounds"] = tuple(
        SinkRound(
            start_date=_coerce_date(r["start_date"]),
            items=tuple(r["items"]),
            daily_max=int(r["daily_max"]),
        )
        for r in raw.get("sink_rounds", [])
    )
    kwargs["injected_effects"] = tuple(
        _effect_from_dict(e) for e in raw.get("effects", [])
    )
    return ScenarioConfig(**kwargs)


def load_synth_config(path: str | Path) -> SynthConfig:
    """Read a direct-DGP config from TOML: a [synth] table with SynthConfig
    keys plus repeated [[effects]] tables."""
    path = Path(path)
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    if "synth" not in raw:
        raise ConfigInvalid([("synth", "missing [synth] table")])
    sc = dict(raw["synth"])
    known = {f.name for f in fields(SynthConfig)}
    unknown = set(sc) - known
    if unknown:
        raise ConfigInvalid([(k, "unknown synth key") for k in sorted(unknown)])
    kwargs = {k: _coerce_date(v) for k, v in sc.items()}
    if "treated_items" in kwargs:
        kwargs["treated_items"] = frozenset(kwargs["treated_items"])
    kwargs["injected_effects"] = tuple(
        _effect_from_dict(e) for e in raw.get("effects", [])
    )
    return SynthConfig(**kwargs)


def _effect_from_dict(e: dict) -> InjectedEffect:
    return InjectedEffect(
        kind=e["kind"],
        magnitude=float(e["magnitude"]),
        cutoff=float(e["cutoff"]) if "cutoff" in e else None,
        items=frozenset(e.get("items", [])),
        effect_date=_coerce_date(e.get("effect_date")),
        outcome=e.get("outcome", "price"),
    )


def _coerce_date(value):
    if isinstance(value, str):
        try:
            return Date.fromisoformat(value)
        except ValueError:
            return value
    return value
