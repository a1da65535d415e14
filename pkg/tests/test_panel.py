from datetime import date

import pytest

from gelab.ingest import load_panel_csv
from gelab.panel import DuplicateObservation, Panel, PanelError, PanelObservation


def test_negative_volume_rejected():
    with pytest.raises(PanelError):
        PanelObservation("a", date(2021, 12, 9), 100.0, -1.0)


def test_nonpositive_price_rejected_when_traded():
    with pytest.raises(PanelError):
        PanelObservation("a", date(2021, 12, 9), 0.0, 5.0)


def test_zero_volume_allows_any_price():
    obs = PanelObservation("a", date(2021, 12, 9), 0.0, 0.0)
    assert obs.volume == 0.0


def test_duplicate_item_date_rejected():
    rows = [
        ("a", date(2021, 12, 9), 100.0, 1.0),
        ("a", date(2021, 12, 9), 101.0, 2.0),
    ]
    with pytest.raises(DuplicateObservation):
        Panel.from_records(rows)


def test_frame_round_trip():
    panel = Panel.from_records(
        [
            ("a", date(2021, 12, 9), 100.0, 1.0),
            ("b", date(2021, 12, 10), 250.5, 3.0),
        ],
        metadata={"provenance": "simulated"},
    )
    back = Panel.from_frame(panel.to_frame(), metadata=panel.metadata)
    assert back.observations == panel.observations
    assert back.metadata == panel.metadata
    assert panel.items == ["a", "b"]


def test_csv_round_trip_is_exact(tmp_path):
    panel = Panel.from_records(
        [
            ("a", date(2021, 12, 9), 100.123456789012345, 7.0),
            ("b", date(2021, 12, 10), 1e9 / 3, 2.0),
        ]
    )
    path = tmp_path / "panel.csv"
    panel.write_csv(path)
    back = load_panel_csv(path)
    assert back.observations == panel.observations
    assert (tmp_path / "panel.csv.meta.json").exists()
