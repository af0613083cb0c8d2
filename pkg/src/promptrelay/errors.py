"""Exception hierarchy.

Every user-facing failure derives from :class:`RelayError` (itself a
``ValueError``), so callers can catch one type. :class:`InvariantError` is the
exception: it signals a bug in this package, not bad input.
"""


class RelayError(ValueError):
    pass


class ShapeError(RelayError):
    pass


class DegenerateRowError(RelayError):
    """A softmax row with no finite logit."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"row {row} has no finite logit (all keys blocked)")


class FullyBlockedQueryError(DegenerateRowError):
    """A query whose every key carries an infinite penalty."""

    def __init__(self, row: int, frame: int | None):
        self.frame = frame
        where = f"latent frame {frame}" if frame is not None else "unknown frame"
        super().__init__(row, f"query {row} ({where}) is blocked from every key")


class ScheduleError(RelayError):
    pass


class ScheduleFormatError(ScheduleError):
    pass


class EmptyScheduleError(ScheduleError):
    def __init__(self):
        super().__init__("empty schedule")


class BoundsError(ScheduleError):
    pass


class OverlapError(ScheduleError):
    def __init__(self, frame: int):
        self.frame = frame
        super().__init__(f"overlap at frame {frame}")


class GapError(ScheduleError):
    def __init__(self, frame: int):
        self.frame = frame
        super().__init__(f"gap at frame {frame}")


class LayoutError(RelayError):
    pass


class ConfigError(RelayError):
    pass


class DegenerateWindowError(ConfigError):
    def __init__(self, half_length: float, window: float, segment_id: int | None = None):
        self.half_length = half_length
        self.window = window
        self.segment_id = segment_id
        prefix = f"segment {segment_id}: " if segment_id is not None else ""
        super().__init__(
            f"{prefix}degenerate window: w={window:g} must be < L={half_length:g}"
        )


class InvariantError(AssertionError):
    """Internal consistency check failed."""
