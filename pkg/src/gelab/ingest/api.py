"""HTTP client for a daily price/volume time-series endpoint.

Maps the endpoint's JSON payload onto panel observations: the canonical
price is the average instant-sell price and the canonical volume is the sum
of buy-side and sell-side volumes. Responses are cached on disk and
requests are rate-limited by a configurable interval floor.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from gelab.ingest.errors import HttpError, ParseError, UnknownItem
from gelab.panel import PanelObservation

# transport: (url, params, headers) -> (status, payload_dict, response_headers)
Transport = Callable[[str, dict, dict], tuple[int, dict, dict]]


@dataclass(frozen=True)
class ApiConfig:
    base_url: str
    user_agent: str
    min_interval_ms: int = 1000
    cache_dir: Optional[Path] = None

    def __post_init__(self):
        if not self.user_agent.strip():
            raise ValueError("user_agent must be a nonempty descriptive string")
        if self.min_interval_ms < 100:
            raise ValueError("min_interval_ms must be >= 100")


def _requests_transport(url: str, params: dict, headers: dict):
    import requests

    resp = requests.get(url, params=params, headers=headers, timeout=30)
    try:
        payload = resp.json()
    except ValueError:
        payload = {}
    return resp.status_code, payload, dict(resp.headers)


class ApiClient:
    def __init__(self, config: ApiConfig, transport: Optional[Transport] = None):
        self.config = config
        self.transport = transport or _requests_transport
        self._last_request_at: Optional[float] = None
        self.request_count = 0

    def fetch_timeseries(
        self,
        item_id: str,
        step: str = "daily",
        date_range: Optional[tuple[str, str]] = None,
    ) -> list[PanelObservation]:
        """Daily observations for one item, served from the disk cache when
        an identical (item, step, date-range) fetch has already happened."""
        cache_path = self._cache_path(item_id, step, date_range)
        if cache_path is not None and cache_path.exists():
            with open(cache_path) as fh:
                payload = json.load(fh)
        else:
            payload = self._request(item_id, step)
            if cache_path is not None:
                cache_path.parent.mkdir(parents=True, exist_ok=True)
                with open(cache_path, "w") as fh:
                    json.dump(payload, fh, sort_keys=True)
                self._update_manifest(cache_path, item_id, step, date_range)
        obs = _parse_payload(payload, item_id)
        if date_range is not None:
            lo, hi = date_range
            obs = [o for o in obs if lo <= o.date.isoformat() <= hi]
        return obs

    # -- internals ----------------------------------------------------------

    def _request(self, item_id: str, step: str) -> dict:
        url = self.config.base_url.rstrip("/") + "/timeseries"
        params = {"id": item_id, "timestep": step}
        headers = {"User-Agent": self.config.user_agent}

        self._respect_rate_floor()
        status, payload, resp_headers = self.transport(url, params, headers)
        self._last_request_at = time.monotonic()
        self.request_count += 1

        if status == 429 and "Retry-After" in resp_headers:
            wait = float(resp_headers["Retry-After"])
            time.sleep(wait)
            self._respect_rate_floor()
            status, payload, resp_headers = self.transport(url, params, headers)
            self._last_request_at = time.monotonic()
            self.request_count += 1
        if status == 404:
            raise UnknownItem(item_id)
        if status != 200:
            retry_after = resp_headers.get("Retry-After")
            raise HttpError(status, url, float(retry_after) if retry_after else None)
        return payload

    def _respect_rate_floor(self) -> None:
        if self._last_request_at is None:
            return
        gap = self.config.min_interval_ms / 1000.0
        elapsed = time.monotonic() - self._last_request_at
        if elapsed < gap:
            time.sleep(gap - elapsed)

    def _cache_path(
        self, item_id: str, step: str, date_range: Optional[tuple[str, str]]
    ) -> Optional[Path]:
        if self.config.cache_dir is None:
            return None
        suffix = f"_{date_range[0]}_{date_range[1]}" if date_range else ""
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in str(item_id))
        return Path(self.config.cache_dir) / f"{safe}_{step}{suffix}.json"

    def _update_manifest(
        self,
        cache_path: Path,
        item_id: str,
        step: str,
        date_range: Optional[tuple[str, str]],
    ) -> None:
        manifest_path = cache_path.parent / "manifest.json"
        manifest = {}
        if manifest_path.exists():
            with open(manifest_path) as fh:
                manifest = json.load(fh)
        manifest[cache_path.name] = {
            "item_id": item_id,
            "step": step,
            "date_range": list(date_range) if date_range else None,
            "fetched_at": datetime.now(timezone.utc).isoformat(),
        }
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)


def _parse_payload(payload: dict, item_id: str) -> list[PanelObservation]:
    if not isinstance(payload, dict) or "data" not in payload:
        raise ParseError("data", "payload has no 'data' array")
    records = payload["data"]
    if not isinstance(records, list):
        raise ParseError("data", "'data' is not an array")
    out = []
    for i, rec in enumerate(records):
        where = f"data[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(where, "record is not an object")
        try:
            ts = rec["timestamp"]
        except KeyError:
            raise ParseError(f"{where}.timestamp", "missing") from None
        sell_price = rec.get("avgLowPrice")
        if sell_price is None:
            continue  # no instant-sell trades that day; leave the day absent
        buy_volume = rec.get("highPriceVolume") or 0
        sell_volume = rec.get("lowPriceVolume") or 0
        try:
            date = datetime.fromtimestamp(int(ts), tz=timezone.utc).date()
            price = float(sell_price)
            volume = float(buy_volume) + float(sell_volume)
        except (TypeError, ValueError) as exc:
            raise ParseError(where, str(exc)) from None
        if price <= 0:
            raise ParseError(f"{where}.avgLowPrice", f"non-positive price {price}")
        out.append(PanelObservation(str(item_id), date, price, volume))
    return out
