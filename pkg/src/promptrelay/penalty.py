"""Boundary-attention-decay penalties.

A query on latent frame ``f`` attending to a key of segment ``s`` pays

    C = relu(|f - m_s| - w) ** 2 / (2 * sigma ** 2)

on its logit, where ``m_s`` is the segment midpoint and ``w`` the half-width
of the penalty-free window. ``sigma`` is chosen so that the retained fraction
``exp(-C)`` equals ``epsilon`` exactly at the segment endpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateWindowError, LayoutError
from .timeline import GLOBAL, SegmentSchedule, TemporalSegment, TokenLayout

AUTO = "auto"
DEFAULT_EPSILON = 0.1


class Mode(str, enum.Enum):
    SOFT = "soft"
    HARD = "hard"
    OFF = "off"


@dataclass(frozen=True)
class PenaltyConfig:
    """Decay threshold, window policy and penalty mode.

    ``window`` is :data:`AUTO` (``w = max(L - 2, 0)`` per segment) or an
    explicit non-negative number of latent frames shared by all segments.
    """

    epsilon: float = DEFAULT_EPSILON
    window: float | str = AUTO
    mode: Mode = Mode.SOFT

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        if self.window != AUTO:
            w = self.window
            if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w < 0:
                raise ConfigError(f"window must be 'auto' or a finite number >= 0, got {w!r}")
        object.__setattr__(self, "mode", Mode(self.mode))

    def window_for(self, half_length: float) -> float:
        if self.window == AUTO:
            return max(half_length - 2.0, 0.0)
        return float(self.window)


def _check_epsilon(epsilon):
    if not (isinstance(epsilon, (int, float)) and 0.0 < epsilon < 1.0):
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def sigma_for(half_length: float, window: float, epsilon: float) -> float:
    """Decay width that makes the retained fraction hit `epsilon` at ``|offset| = L``."""
    _check_epsilon(epsilon)
    if window < 0:
        raise ConfigError(f"window must be >= 0, got {window!r}")
    if window >= half_length:
        raise DegenerateWindowError(half_length, window)
    return (half_length - window) / math.sqrt(2.0 * math.log(1.0 / epsilon))


def offset_penalty(offset, window: float, sigma: float):
    """Penalty as a function of the signed frame offset from the midpoint.

    Works on scalars and arrays; exactly symmetric in the sign of `offset`.
    """
    excess = np.maximum(np.abs(offset) - window, 0.0)
    c = excess * excess / (2.0 * sigma * sigma)
    return float(c) if np.ndim(c) == 0 else c


def penalty_value(frame, segment: TemporalSegment, window: float, sigma: float):
    return offset_penalty(np.asarray(frame, dtype=np.float64) - segment.midpoint, window, sigma)


def segment_window_sigma(segment: TemporalSegment, config: PenaltyConfig) -> tuple[float, float]:
    """Resolve ``(w, sigma)`` for one segment, tagging errors with its id."""
    L = segment.half_length
    w = config.window_for(L)
    try:
        return w, sigma_for(L, w, config.epsilon)
    except DegenerateWindowError:
        raise DegenerateWindowError(L, w, segment.segment_id) from None


@dataclass(frozen=True, eq=False)
class PenaltyMatrix:
    """Dense query-by-key penalties plus the query frames they were built for."""

    values: np.ndarray
    mode: Mode
    query_frame: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def retained(self) -> np.ndarray:
        """Multiplicative prior ``exp(-C)``."""
        return np.exp(-self.values)


def _check_layout(schedule: SegmentSchedule, layout: TokenLayout):
    ids = {s.segment_id for s in schedule.segments}
    if schedule.global_prompt_id is not None:
        ids.add(GLOBAL)
    stray = set(np.unique(layout.key_owner).tolist()) - ids
    if stray:
        raise LayoutError(f"key owners {sorted(stray)} are not in the schedule")
    if layout.query_count and layout.query_frame.max() >= schedule.video_frames:
        raise LayoutError("layout has query frames beyond the end of the video")


def owner_penalties(schedule: SegmentSchedule, frames: np.ndarray, config: PenaltyConfig) -> np.ndarray:
    """Penalty of each frame against each segment, shape ``(len(frames), n_segments)``."""
    frames = np.asarray(frames, dtype=np.float64)
    out = np.zeros((len(frames), len(schedule.segments)))
    if config.mode is Mode.OFF:
        return out
    for k, seg in enumerate(schedule.segments):
        if config.mode is Mode.HARD:
            inside = (frames >= seg.start_frame) & (frames <= seg.end_frame)
            out[:, k] = np.where(inside, 0.0, np.inf)
        else:
            w, sigma = segment_window_sigma(seg, config)
            out[:, k] = penalty_value(frames, seg, w, sigma)
    return out


def build_penalty_matrix(
    schedule: SegmentSchedule, layout: TokenLayout, config: PenaltyConfig
) -> PenaltyMatrix:
    """Penalty for every (query, key) pair; global-prompt keys are always free."""
    _check_layout(schedule, layout)
    per_segment = owner_penalties(schedule, layout.query_frame, config)
    # column 0 is the global owner, segment ids index the rest directly
    table = np.hstack([np.zeros((layout.query_count, 1)), per_segment])
    values = np.ascontiguousarray(table[:, layout.key_owner])
    values.flags.writeable = False
    return PenaltyMatrix(values, config.mode, layout.query_frame)


@dataclass(frozen=True, eq=False)
class DecayCurve:
    offsets: np.ndarray
    retained_fraction: np.ndarray

    def __iter__(self):
        return zip(self.offsets.tolist(), self.retained_fraction.tolist())


def decay_curve(half_length: float, window: float, epsilon: float, offsets) -> DecayCurve:
    """Retained attention fraction ``exp(-C)`` at each offset from the midpoint."""
    sigma = sigma_for(half_length, window, epsilon)
    offsets = np.asarray(offsets, dtype=np.float64)
    if not np.isfinite(offsets).all():
        raise ValueError("offsets must be finite")
    return DecayCurve(offsets, np.exp(-offset_penalty(offsets, window, sigma)))
