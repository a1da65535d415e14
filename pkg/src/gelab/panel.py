"""Long-format daily panel of (item, date, price, volume) observations.

The Panel is the common currency between the simulator, the data loaders,
and every estimator.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date as Date
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd


class PanelError(ValueError):
    pass


class DuplicateObservation(PanelError):
    pass


@dataclass(frozen=True)
class PanelObservation:
    item_id: str
    date: Date
    price: float
    volume: float

    def __post_init__(self):
        if self.volume < 0:
            raise PanelError(f"negative volume for {self.item_id} on {self.date}")
        if self.volume > 0 and self.price <= 0:
            raise PanelError(f"non-positive price for {self.item_id} on {self.date}")


@dataclass
class Panel:
    """Daily item-level observations plus provenance metadata.

    metadata keys used by the toolkit:
      - "provenance": "simulated" | "ingested"
      - "ground_truth": list of injected-effect dicts (simulated panels only)
    """

    observations: list[PanelObservation]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for obs in self.observations:
            key = (obs.item_id, obs.date)
            if key in seen:
                raise DuplicateObservation(f"duplicate observation for {key}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def items(self) -> list[str]:
        return sorted({o.item_id for o in self.observations})

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(
            {
                "item_id": [o.item_id for o in self.observations],
                "date": [o.date for o in self.observations],
                "price": [o.price for o in self.observations],
                "volume": [o.volume for o in self.observations],
            }
        )
        return df

    @classmethod
    def from_frame(cls, df: pd.DataFrame, metadata: Optional[dict] = None) -> "Panel":
        obs = [
            PanelObservation(str(r.item_id), _as_date(r.date), float(r.price), float(r.volume))
            for r in df.itertuples(index=False)
        ]
        return cls(obs, metadata or {})

    @classmethod
    def from_records(
        cls, records: Iterable[tuple[str, Date, float, float]], metadata: Optional[dict] = None
    ) -> "Panel":
        return cls([PanelObservation(*r) for r in records], metadata or {})

    def write_csv(self, path: str | Path, sidecar: bool = True) -> None:
        """Export as `item_id,date,price,volume` plus a JSON metadata sidecar."""
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["item_id", "date", "price", "volume"])
            for o in self.observations:
                writer.writerow([o.item_id, o.date.isoformat(), repr(o.price), repr(o.volume)])
        if sidecar:
            meta_path = path.with_suffix(path.suffix + ".meta.json")
            with open(meta_path, "w") as fh:
                json.dump(self.metadata, fh, indent=2, sort_keys=True, default=str)


def _as_date(value) -> Date:
    if isinstance(value, Date):
        return value
    return Date.fromisoformat(str(value)[:10])
