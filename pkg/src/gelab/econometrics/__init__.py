from gelab.econometrics.breaks import BreakTestResult, break_test
from gelab.econometrics.controls import (
    ControlSetConfig,
    ControlSetResult,
    build_control_set,
    price_correlation,
)
from gelab.econometrics.did import DidEstimate, DidSpec, did_estimate, did_frame
from gelab.econometrics.errors import (
    DateOutOfRange,
    DegenerateSeries,
    EmptyControlSet,
    EmptyGroup,
    EstimationError,
    GroupsOverlap,
    InsufficientOverlap,
    InsufficientSupport,
    NoPostPeriod,
    NoPrePeriod,
    RankDeficient,
    SeriesTooShort,
    WindowTooShort,
    ZeroVolumeWeek,
)
from gelab.econometrics.index import (
    IndexPoint,
    PriceIndexSeries,
    price_index,
    week_start_of,
)
from gelab.econometrics.localpoly import LocalPolyFit, kernel_weights, local_poly_fit
from gelab.econometrics.pretrends import PretrendsResult, pretrends_test
from gelab.econometrics.rd import RdEstimate, RdSpec, rd_estimate, rd_window_data
from gelab.econometrics.rk import RkEstimate, RkSpec, rk_estimate

__all__ = [
    "BreakTestResult",
    "ControlSetConfig",
    "ControlSetResult",
    "DateOutOfRange",
    "DegenerateSeries",
    "DidEstimate",
    "DidSpec",
    "EmptyControlSet",
    "EmptyGroup",
    "EstimationError",
    "GroupsOverlap",
    "IndexPoint",
    "InsufficientOverlap",
    "InsufficientSupport",
    "LocalPolyFit",
    "NoPostPeriod",
    "NoPrePeriod",
    "PretrendsResult",
    "PriceIndexSeries",
    "RankDeficient",
    "RdEstimate",
    "RdSpec",
    "RkEstimate",
    "RkSpec",
    "SeriesTooShort",
    "WindowTooShort",
    "ZeroVolumeWeek",
    "break_test",
    "build_control_set",
    "did_estimate",
    "did_frame",
    "kernel_weights",
    "local_poly_fit",
    "pretrends_test",
    "price_correlation",
    "price_index",
    "rd_estimate",
    "rd_window_data",
    "rk_estimate",
    "week_start_of",
]
