import json

import numpy as np
import pytest

from promptrelay import (
    GLOBAL,
    BoundsError,
    EmptyScheduleError,
    GapError,
    LayoutError,
    OverlapError,
    ScheduleFormatError,
    build_token_layout,
    load_schedule,
    validate_schedule,
)

TWO = {"video_frames": 12, "segments": [("pA", 0, 5), ("pB", 6, 11)]}


def test_two_segment_midpoints():
    sched = validate_schedule(TWO)
    a, b = sched.segments
    assert (a.midpoint, a.half_length) == (2.5, 2.5)
    assert (b.midpoint, b.half_length) == (8.5, 2.5)


def test_three_segments():
    sched = validate_schedule(
        {"video_frames": 21, "segments": [("pA", 0, 6), ("pB", 7, 13), ("pC", 14, 20)]}
    )
    assert [s.half_length for s in sched.segments] == [3, 3, 3]
    assert [s.midpoint for s in sched.segments] == [3, 10, 17]


def test_segments_sorted_and_numbered():
    sched = validate_schedule({"video_frames": 12, "segments": [("pB", 6, 11), ("pA", 0, 5)]})
    assert [(s.segment_id, s.prompt_id) for s in sched.segments] == [(1, "pA"), (2, "pB")]


def test_overlap_reports_frame():
    with pytest.raises(OverlapError, match="overlap at frame 6") as info:
        validate_schedule({"video_frames": 12, "segments": [("pA", 0, 6), ("pB", 6, 11)]})
    assert info.value.frame == 6


@pytest.mark.parametrize(
    "segments, frame",
    [
        ([("pA", 1, 5), ("pB", 6, 11)], 0),
        ([("pA", 0, 4), ("pB", 6, 11)], 5),
        ([("pA", 0, 5), ("pB", 6, 10)], 11),
    ],
)
def test_gap_reports_frame(segments, frame):
    with pytest.raises(GapError) as info:
        validate_schedule({"video_frames": 12, "segments": segments})
    assert info.value.frame == frame


@pytest.mark.parametrize("seg", [("pA", 0, 12), ("pA", -1, 11), ("pA", 5, 3)])
def test_bounds(seg):
    with pytest.raises(BoundsError):
        validate_schedule({"video_frames": 12, "segments": [seg]})


def test_empty():
    with pytest.raises(EmptyScheduleError, match="empty schedule"):
        validate_schedule({"video_frames": 12, "segments": []})


@pytest.mark.parametrize(
    "raw",
    [
        {"video_frames": 4, "segments": [("a", 0, 3)], "fps": 24},
        {"video_frames": 4, "segments": [{"prompt": "a", "start": 0, "end": 3, "weight": 1}]},
        {"video_frames": 4, "segments": [{"prompt": "a", "start": 0}]},
        {"video_frames": "4", "segments": [("a", 0, 3)]},
        {"video_frames": 4, "segments": [("a", 0.0, 3)]},
        {"video_frames": 4, "segments": [("a", 0, 1), ("a", 2, 3)]},
        {"video_frames": 4, "segments": [("a", 0, 3)], "global_prompt": "a"},
        {"segments": [("a", 0, 3)]},
    ],
)
def test_format_errors(raw):
    with pytest.raises(ScheduleFormatError):
        validate_schedule(raw)


def test_idempotent(schedule):
    assert validate_schedule(schedule) == schedule
    assert validate_schedule(schedule.to_dict()) == schedule


def test_midpoint_half_length_reconstruct_endpoints(schedule):
    for s in schedule.segments:
        assert s.midpoint - s.half_length == s.start_frame
        assert s.midpoint + s.half_length == s.end_frame
        assert s.half_length == s.end_frame - s.midpoint


def test_every_frame_covered_once(schedule):
    for f in range(schedule.video_frames):
        assert sum(s.contains(f) for s in schedule.segments) == 1
    assert schedule.frame_owner().tolist() == [schedule.segment_at(f).segment_id for f in range(schedule.video_frames)]


def test_load_schedule_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(
        json.dumps(
            {
                "video_frames": 12,
                "global_prompt": "a kitchen",
                "segments": [{"prompt": "pA", "start": 0, "end": 5}, {"prompt": "pB", "start": 6, "end": 11}],
            }
        ),
        encoding="utf-8",
    )
    sched = load_schedule(path)
    assert sched.global_prompt_id == "a kitchen"
    assert sched.prompt_ids == ("pA", "pB", "a kitchen")


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "s.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ScheduleFormatError):
        load_schedule(path)


def test_query_frames_floor_division():
    sched = validate_schedule({"video_frames": 2, "segments": [("a", 0, 1)]})
    layout = build_token_layout(sched, 3, {"a": 1})
    assert layout.query_frame.tolist() == [0, 0, 0, 1, 1, 1]


def test_one_token_per_frame_is_identity(schedule):
    layout = build_token_layout(schedule, 1, 2)
    np.testing.assert_array_equal(layout.query_frame, np.arange(schedule.video_frames))


def test_key_layout_with_global():
    sched = validate_schedule({**TWO, "global_prompt": "g"})
    layout = build_token_layout(sched, 1, {"pA": 4, "pB": 4}, global_tokens=2)
    assert layout.key_owner.tolist() == [1] * 4 + [2] * 4 + [GLOBAL] * 2
    assert layout.key_count == 10
    assert layout.key_counts() == {GLOBAL: 2, 1: 4, 2: 4}


def test_layout_counts(schedule):
    layout = build_token_layout(schedule, 4, 8)
    assert layout.query_count == schedule.video_frames * 4
    assert layout.key_count == 8 * len(schedule.segments)
    assert layout.query_frame.max() < schedule.video_frames


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(tokens_per_frame=0, tokens_per_prompt=1),
        dict(tokens_per_frame=1, tokens_per_prompt={"pA": 1}),
        dict(tokens_per_frame=1, tokens_per_prompt={"pA": 1, "pB": 0}),
        dict(tokens_per_frame=1, tokens_per_prompt=1, global_tokens=2),
    ],
)
def test_layout_errors(kwargs):
    with pytest.raises(LayoutError):
        build_token_layout(validate_schedule(TWO), **kwargs)


def test_global_prompt_needs_tokens():
    with pytest.raises(LayoutError, match="global_tokens is 0"):
        build_token_layout(validate_schedule({**TWO, "global_prompt": "g"}), 1, 1)
