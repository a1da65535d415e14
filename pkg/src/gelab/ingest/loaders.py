"""CSV loaders: daily panels and official/illicit currency-price series."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date as Date
from pathlib import Path
from typing import Optional

from gelab.ingest.errors import DuplicateKey, EmptySeries, NonPositivePrice, SchemaError
from gelab.panel import Panel, PanelObservation

PANEL_HEADER = ["item_id", "date", "price", "volume"]
GP_PRICE_HEADER = ["date", "source", "usd_per_million"]

OFFICIAL_SOURCE = "official"


def load_panel_csv(path: str | Path) -> Panel:
    """Load and validate a `item_id,date,price,volume` panel file."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(path, None, "file does not exist")
    observations = []
    seen: set[tuple[str, Date]] = set()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PANEL_HEADER:
            raise SchemaError(
                path, 1, f"expected header {','.join(PANEL_HEADER)}, got {header}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise SchemaError(path, lineno, f"expected 4 fields, got {len(row)}")
            item_id, date_s, price_s, volume_s = row
            try:
                date = Date.fromisoformat(date_s)
            except ValueError:
                raise SchemaError(path, lineno, f"bad date {date_s!r}") from None
            try:
                price = float(price_s)
                volume = float(volume_s)
            except ValueError:
                raise SchemaError(path, lineno, "price/volume not numeric") from None
            if volume > 0 and price <= 0:
                raise NonPositivePrice(path, lineno, f"price {price} with volume {volume}")
            if volume < 0:
                raise SchemaError(path, lineno, f"negative volume {volume}")
            key = (item_id, date)
            if key in seen:
                raise DuplicateKey(path, lineno, f"duplicate (item,date) {key}")
            seen.add(key)
            observations.append(PanelObservation(item_id, date, price, volume))
    return Panel(observations, {"provenance": "ingested", "source": str(path)})


@dataclass(frozen=True)
class GpPricePoint:
    date: Date
    source: str  # "official" or a seller identifier
    usd_per_million_gp: float


@dataclass
class GpPriceSummary:
    per_source_mean: dict[str, float]
    per_source_range: dict[str, tuple[float, float]]
    # official minus mean illicit, per date; None when either side is absent
    risk_premium: dict[Date, float]
    premium_undefined: bool  # True when official or illicit side is missing


def load_gp_prices(
    official_path: str | Path, sellers_path: str | Path
) -> tuple[list[GpPricePoint], GpPriceSummary]:
    """Merge official and illicit USD-per-million-GP series and summarize.

    The risk premium is the official price minus the mean illicit price,
    per date where both are observed.
    """
    points = _load_gp_csv(official_path) + _load_gp_csv(sellers_path)
    if not points:
        raise EmptySeries("no GP price points loaded")
    seen = set()
    for p in points:
        key = (p.date, p.source)
        if key in seen:
            raise DuplicateKey("merged gp series", None, f"duplicate (date, source) {key}")
        seen.add(key)

    by_source: dict[str, list[float]] = {}
    for p in points:
        by_source.setdefault(p.source, []).append(p.usd_per_million_gp)
    per_source_mean = {s: sum(v) / len(v) for s, v in by_source.items()}
    per_source_range = {s: (min(v), max(v)) for s, v in by_source.items()}

    official = {p.date: p.usd_per_million_gp for p in points if p.source == OFFICIAL_SOURCE}
    illicit: dict[Date, list[float]] = {}
    for p in points:
        if p.source != OFFICIAL_SOURCE:
            illicit.setdefault(p.date, []).append(p.usd_per_million_gp)

    premium = {
        d: official[d] - sum(v) / len(v)
        for d, v in sorted(illicit.items())
        if d in official
    }
    summary = GpPriceSummary(
        per_source_mean=per_source_mean,
        per_source_range=per_source_range,
        risk_premium=premium,
        premium_undefined=not official or not illicit,
    )
    return sorted(points, key=lambda p: (p.date, p.source)), summary


def _load_gp_csv(path: str | Path) -> list[GpPricePoint]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(path, None, "file does not exist")
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != GP_PRICE_HEADER:
            raise SchemaError(
                path, 1, f"expected header {','.join(GP_PRICE_HEADER)}, got {header}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SchemaError(path, lineno, f"expected 3 fields, got {len(row)}")
            date_s, source, usd_s = row
            try:
                date = Date.fromisoformat(date_s)
                usd = float(usd_s)
            except ValueError as exc:
                raise SchemaError(path, lineno, str(exc)) from None
            if usd <= 0:
                raise NonPositivePrice(path, lineno, f"usd_per_million {usd}")
            out.append(GpPricePoint(date, source, usd))
    return out
