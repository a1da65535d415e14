"""Estimator-side error types."""


class EstimationError(Exception):
    pass


class EmptyGroup(EstimationError):
    pass


class ZeroVolumeWeek(EstimationError):
    def __init__(self, week_start):
        self.week_start = week_start
        super().__init__(f"zero total volume in week starting {week_start}")


class InsufficientOverlap(EstimationError):
    pass


class DegenerateSeries(EstimationError):
    pass


class EmptyControlSet(EstimationError):
    pass


class RankDeficient(EstimationError):
    pass


class InsufficientSupport(EstimationError):
    pass


class GroupsOverlap(EstimationError):
    pass


class NoPrePeriod(EstimationError):
    pass


class NoPostPeriod(EstimationError):
    pass


class WindowTooShort(EstimationError):
    pass


class SeriesTooShort(EstimationError):
    pass


class DateOutOfRange(EstimationError):
    pass
