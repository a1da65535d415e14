from gelab.ingest.api import ApiClient, ApiConfig
from gelab.ingest.errors import (
    DuplicateKey,
    EmptySeries,
    HttpError,
    IngestError,
    NonPositivePrice,
    ParseError,
    SchemaError,
    UnknownItem,
)
from gelab.ingest.loaders import (
    GpPricePoint,
    GpPriceSummary,
    OFFICIAL_SOURCE,
    load_gp_prices,
    load_panel_csv,
)

__all__ = [
    "ApiClient",
    "ApiConfig",
    "DuplicateKey",
    "EmptySeries",
    "GpPricePoint",
    "GpPriceSummary",
    "HttpError",
    "IngestError",
    "NonPositivePrice",
    "OFFICIAL_SOURCE",
    "ParseError",
    "SchemaError",
    "UnknownItem",
    "load_gp_prices",
    "load_panel_csv",
]
