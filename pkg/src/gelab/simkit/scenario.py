"""Agent-based scenario runner: order flow through the matching engine.

Agents are not strategic; each day they place buy and sell orders around an
item's fundamental value, which follows an AR(1) in logs. Interventions
(tax start, sink rounds) activate per the schedule; injected demand effects
shift treated items' fundamental value after their effect date.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta

import numpy as np

from gelab.exchange import (
    ExchangeError,
    ItemSpec,
    Market,
    Side,
    SinkPolicy,
    TaxSchedule,
)
from gelab.panel import Panel, PanelObservation
from gelab.simkit.config import ScenarioConfig

HIGH_LEVEL_PRICE = 100_000.0


@dataclass
class ScenarioResult:
    panel: Panel
    market: Market
    config: ScenarioConfig

    @property
    def ground_truth(self) -> list[dict]:
        return self.panel.metadata.get("ground_truth", [])


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    rng = np.random.default_rng(config.seed)
    items = config.item_ids()
    agents = [f"agent_{i:03d}" for i in range(config.n_agents)]

    base_log_value = config.base_log_price_mean + config.base_log_price_sd * (
        rng.standard_normal(config.n_items)
    )

    specs = [
        ItemSpec(
            id=item,
            name=item,
            buy_limit=config.buy_limit,
            high_level=float(np.exp(base_log_value[i])) > HIGH_LEVEL_PRICE,
        )
        for i, item in enumerate(items)
    ]
    market = Market(specs, tax=None, base_date=config.start_date)

    # Ample endowments so budget/inventory constraints never bind by design;
    # the exchange still enforces them.
    max_value = float(np.exp(base_log_value.max()))
    start_gp = int(max_value * config.order_qty_max * config.orders_per_item_day * 50)
    start_inventory = {
        item: config.order_qty_max * config.orders_per_item_day * config.n_days * 2
        for item in items
    }
    for agent in agents:
        market.add_player(agent, gp=start_gp, inventory=dict(start_inventory))

    log_value = base_log_value.copy()
    observations: list[PanelObservation] = []

    for d in range(config.n_days):
        date = config.start_date + timedelta(days=d)

        if config.tax_start_date is not None and date >= config.tax_start_date:
            if market.tax is None:
                market.tax = TaxSchedule()

        # AR(1) step around the (possibly demand-shifted) item mean.
        mean = base_log_value.copy()
        for eff in config.injected_effects:
            if eff.kind != "did_level" or eff.effect_date is None:
                continue
            if date >= eff.effect_date:
                for i, item in enumerate(items):
                    if item in eff.items:
                        mean[i] += eff.magnitude
        shocks = rng.standard_normal(config.n_items)
        log_value = (
            mean
            + config.ar1_rho * (log_value - mean)
            + config.drift
            + config.volatility * shocks
        )

        for slot in range(config.orders_per_item_day):
            hour = d * 24 + 23.0 * (slot + 0.5) / config.orders_per_item_day
            market.advance_to(hour)
            for i, item in enumerate(items):
                value = float(np.exp(log_value[i]))
                seller, buyer = _pick_two(rng, agents)
                qty = int(rng.integers(1, config.order_qty_max + 1))
                sell_px = max(1, int(round(value * np.exp(
                    rng.normal(0.0, config.limit_spread)
                ))))
                buy_px = max(1, int(round(value * np.exp(
                    rng.normal(0.0, config.limit_spread)
                ))))
                try:
                    market.submit_order(seller, Side.SELL, item, sell_px, qty)
                except ExchangeError:
                    pass
                try:
                    market.submit_order(buyer, Side.BUY, item, buy_px, qty)
                except ExchangeError:
                    pass

        market.advance_to(d * 24 + 23.5)
        for rnd in config.sink_rounds:
            if date >= rnd.start_date:
                policy = SinkPolicy(
                    target_items=frozenset(rnd.items),
                    daily_max=rnd.daily_max,
                    active_from=rnd.start_date,
                )
                market.run_sink_day(policy, date)

        observations.extend(market.daily_summary(date))
        market.cancel_all()

    metadata = {
        "provenance": "simulated",
        "generator": "run_scenario",
        "seed": config.seed,
        "ground_truth": [e.to_dict() for e in config.injected_effects],
    }
    return ScenarioResult(
        panel=Panel(observations, metadata), market=market, config=config
    )


def _pick_two(rng: np.random.Generator, agents: list[str]) -> tuple[str, str]:
    i, j = rng.choice(len(agents), size=2, replace=False)
    return agents[int(i)], agents[int(j)]
