"""Prompt timelines: segments on latent frames, and token-to-frame layouts.

Frame intervals are inclusive on both ends and measured in latent frames.
A schedule must cover every frame exactly once. Query tokens are flattened
frame-major, so query ``i`` lives on frame ``i // tokens_per_frame``. Keys are
laid out segment by segment in schedule order, with global-prompt keys last.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BoundsError,
    EmptyScheduleError,
    GapError,
    LayoutError,
    OverlapError,
    ScheduleFormatError,
)

#: Key owner id for global-prompt tokens. Segment ids start at 1.
GLOBAL = 0

_TOP_LEVEL_FIELDS = {"video_frames", "global_prompt", "segments"}
_SEGMENT_FIELDS = {"prompt", "start", "end"}


@dataclass(frozen=True)
class TemporalSegment:
    segment_id: int
    prompt_id: str
    start_frame: int
    end_frame: int

    @property
    def midpoint(self) -> float:
        return (self.start_frame + self.end_frame) / 2

    @property
    def half_length(self) -> float:
        return (self.end_frame - self.start_frame) / 2

    @property
    def frame_count(self) -> int:
        return self.end_frame - self.start_frame + 1

    def contains(self, frame) -> bool:
        return self.start_frame <= frame <= self.end_frame


@dataclass(frozen=True)
class SegmentSchedule:
    video_frames: int
    segments: tuple[TemporalSegment, ...]
    global_prompt_id: str | None = None

    @property
    def prompt_ids(self) -> tuple[str, ...]:
        """Segment prompt ids in schedule order, then the global prompt if any."""
        ids = tuple(s.prompt_id for s in self.segments)
        if self.global_prompt_id is not None:
            ids += (self.global_prompt_id,)
        return ids

    def segment_at(self, frame: int) -> TemporalSegment:
        for seg in self.segments:
            if seg.contains(frame):
                return seg
        raise BoundsError(f"frame {frame} is outside the video (0..{self.video_frames - 1})")

    def frame_owner(self) -> np.ndarray:
        """Segment id covering each frame."""
        owner = np.empty(self.video_frames, dtype=np.int64)
        for seg in self.segments:
            owner[seg.start_frame : seg.end_frame + 1] = seg.segment_id
        return owner

    def to_dict(self) -> dict:
        out = {
            "video_frames": self.video_frames,
            "segments": [
                {"prompt": s.prompt_id, "start": s.start_frame, "end": s.end_frame}
                for s in self.segments
            ],
        }
        if self.global_prompt_id is not None:
            out["global_prompt"] = self.global_prompt_id
        return out


def _int_field(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ScheduleFormatError(f"{what} must be an integer, got {value!r}")
    return int(value)


def _str_field(value, what: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScheduleFormatError(f"{what} must be a non-empty string, got {value!r}")
    return value


def _segment_entries(raw_segments):
    for k, entry in enumerate(raw_segments):
        if isinstance(entry, TemporalSegment):
            yield entry.prompt_id, entry.start_frame, entry.end_frame
        elif isinstance(entry, Mapping):
            unknown = set(entry) - _SEGMENT_FIELDS
            if unknown:
                raise ScheduleFormatError(f"segments[{k}]: unknown field(s) {sorted(unknown)}")
            missing = _SEGMENT_FIELDS - set(entry)
            if missing:
                raise ScheduleFormatError(f"segments[{k}]: missing field(s) {sorted(missing)}")
            yield entry["prompt"], entry["start"], entry["end"]
        elif isinstance(entry, (tuple, list)) and len(entry) == 3:
            yield tuple(entry)
        else:
            raise ScheduleFormatError(f"segments[{k}]: expected (prompt, start, end), got {entry!r}")


def validate_schedule(raw) -> SegmentSchedule:
    """Check and normalize a schedule description.

    `raw` is a :class:`SegmentSchedule` or a mapping with ``video_frames``,
    ``segments`` and an optional ``global_prompt``. Segments may be given as
    ``{"prompt", "start", "end"}`` records or ``(prompt, start, end)`` tuples.
    The result has segments sorted by start frame and renumbered from 1.

    Raises a :class:`~promptrelay.errors.ScheduleError` subclass on the first
    structural problem found: empty, bounds, overlap or gap.
    """
    if isinstance(raw, SegmentSchedule):
        raw = {
            "video_frames": raw.video_frames,
            "segments": raw.segments,
            "global_prompt": raw.global_prompt_id,
        }
    if not isinstance(raw, Mapping):
        raise ScheduleFormatError(f"schedule must be a mapping, got {type(raw).__name__}")
    unknown = set(raw) - _TOP_LEVEL_FIELDS
    if unknown:
        raise ScheduleFormatError(f"unknown field(s) {sorted(unknown)}")
    if "video_frames" not in raw:
        raise ScheduleFormatError("missing field 'video_frames'")
    frames = _int_field(raw["video_frames"], "video_frames")
    if frames < 1:
        raise BoundsError(f"video_frames must be >= 1, got {frames}")
    global_prompt = raw.get("global_prompt")
    if global_prompt is not None:
        global_prompt = _str_field(global_prompt, "global_prompt")

    raw_segments = raw.get("segments")
    if raw_segments is None:
        raise ScheduleFormatError("missing field 'segments'")
    if isinstance(raw_segments, (str, bytes, Mapping)):
        raise ScheduleFormatError("'segments' must be a list")
    parsed = []
    for k, (prompt, start, end) in enumerate(_segment_entries(raw_segments)):
        prompt = _str_field(prompt, f"segments[{k}].prompt")
        start = _int_field(start, f"segments[{k}].start")
        end = _int_field(end, f"segments[{k}].end")
        if start > end:
            raise BoundsError(f"segment {prompt!r}: start {start} is after end {end}")
        if start < 0 or end > frames - 1:
            raise BoundsError(
                f"segment {prompt!r}: interval [{start}, {end}] is outside the video (0..{frames - 1})"
            )
        parsed.append((start, end, prompt))
    if not parsed:
        raise EmptyScheduleError()

    seen = set()
    for _, _, prompt in parsed:
        if prompt in seen or prompt == global_prompt:
            raise ScheduleFormatError(f"duplicate prompt id {prompt!r}")
        seen.add(prompt)

    parsed.sort(key=lambda t: (t[0], t[1]))
    if parsed[0][0] > 0:
        raise GapError(0)
    for (_, prev_end, _), (start, _, _) in zip(parsed, parsed[1:]):
        if start <= prev_end:
            raise OverlapError(start)
        if start > prev_end + 1:
            raise GapError(prev_end + 1)
    if parsed[-1][1] < frames - 1:
        raise GapError(parsed[-1][1] + 1)

    segments = tuple(
        TemporalSegment(k, prompt, start, end) for k, (start, end, prompt) in enumerate(parsed, 1)
    )
    return SegmentSchedule(frames, segments, global_prompt)


def load_schedule(path) -> SegmentSchedule:
    """Read and validate a JSON schedule file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleFormatError(f"{path}: invalid JSON ({exc})") from None
    return validate_schedule(raw)


@dataclass(frozen=True, eq=False)
class TokenLayout:
    """Query-token frames and key-token owners.

    ``key_owner[j]`` is a segment id, or :data:`GLOBAL` for global-prompt keys.
    """

    query_frame: np.ndarray
    key_owner: np.ndarray
    tokens_per_frame: int

    @property
    def query_count(self) -> int:
        return len(self.query_frame)

    @property
    def key_count(self) -> int:
        return len(self.key_owner)

    def key_counts(self) -> dict[int, int]:
        owners, counts = np.unique(self.key_owner, return_counts=True)
        return dict(zip(owners.tolist(), counts.tolist()))


def build_token_layout(
    schedule: SegmentSchedule,
    tokens_per_frame: int,
    tokens_per_prompt: Mapping[str, int] | int,
    global_tokens: int = 0,
) -> TokenLayout:
    if tokens_per_frame < 1:
        raise LayoutError(f"tokens_per_frame must be >= 1, got {tokens_per_frame}")
    if isinstance(tokens_per_prompt, int):
        tokens_per_prompt = {s.prompt_id: tokens_per_prompt for s in schedule.segments}
    if global_tokens < 0:
        raise LayoutError(f"global_tokens must be >= 0, got {global_tokens}")
    if (global_tokens > 0) != (schedule.global_prompt_id is not None):
        if global_tokens > 0:
            raise LayoutError("global_tokens > 0 but the schedule has no global prompt")
        raise LayoutError(
            f"schedule has global prompt {schedule.global_prompt_id!r} but global_tokens is 0"
        )

    owners = []
    for seg in schedule.segments:
        if seg.prompt_id not in tokens_per_prompt:
            raise LayoutError(f"missing token count for prompt {seg.prompt_id!r}")
        n = tokens_per_prompt[seg.prompt_id]
        if n < 1:
            raise LayoutError(f"prompt {seg.prompt_id!r} needs >= 1 token, got {n}")
        owners += [seg.segment_id] * n
    owners += [GLOBAL] * global_tokens

    query_frame = np.arange(schedule.video_frames * tokens_per_frame) // tokens_per_frame
    key_owner = np.asarray(owners, dtype=np.int64)
    query_frame.flags.writeable = False
    key_owner.flags.writeable = False
    return TokenLayout(query_frame, key_owner, tokens_per_frame)
