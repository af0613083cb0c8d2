"""Desk-scale routing check.

Each prompt's value vectors are one-hot indicators of that prompt, so the
penalized-attention output for a query *is* its attention mass per prompt.
Averaging over a frame's spatial queries gives the frame's occupancy row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attention import AttentionInputs, penalized_attention
from .errors import InvariantError
from .penalty import Mode, PenaltyConfig, build_penalty_matrix, owner_penalties
from .timeline import GLOBAL, SegmentSchedule, TokenLayout

UNIFORM = "uniform"
RANDOM = "random"
EMBED_DIM = 8


def _owner_columns(schedule: SegmentSchedule, layout: TokenLayout) -> np.ndarray:
    """Occupancy column of each key: segments in order, global last."""
    cols = layout.key_owner - 1
    return np.where(layout.key_owner == GLOBAL, len(schedule.segments), cols)


def synth_inputs(
    schedule: SegmentSchedule,
    layout: TokenLayout,
    profile: str = UNIFORM,
    seed: int = 0,
) -> AttentionInputs:
    """Synthetic Q, K and one-hot V for a schedule.

    ``uniform`` makes every logit exactly 0; ``random`` draws Q and K from a
    standard normal seeded by `seed`.
    """
    n_prompts = len(schedule.prompt_ids)
    v = np.zeros((layout.key_count, n_prompts))
    v[np.arange(layout.key_count), _owner_columns(schedule, layout)] = 1.0
    if profile == UNIFORM:
        q = np.zeros((layout.query_count, EMBED_DIM))
        k = np.zeros((layout.key_count, EMBED_DIM))
    elif profile == RANDOM:
        rng = np.random.default_rng(seed)
        q = rng.standard_normal((layout.query_count, EMBED_DIM))
        k = rng.standard_normal((layout.key_count, EMBED_DIM))
    else:
        raise ValueError(f"unknown logit profile {profile!r}")
    return AttentionInputs(q, k, v)


@dataclass(frozen=True, eq=False)
class OccupancyTrace:
    prompts: tuple[str, ...]
    mass: np.ndarray
    mode: Mode = Mode.SOFT

    @property
    def frames(self) -> int:
        return self.mass.shape[0]


def _frame_mean(rows: np.ndarray, query_frame: np.ndarray, frames: int) -> np.ndarray:
    sums = np.zeros((frames, rows.shape[1]))
    np.add.at(sums, query_frame, rows)
    counts = np.bincount(query_frame, minlength=frames)
    return sums / counts[:, None]


def occupancy(
    schedule: SegmentSchedule,
    layout: TokenLayout,
    config: PenaltyConfig,
    profile: str = UNIFORM,
    seed: int = 0,
) -> OccupancyTrace:
    inputs = synth_inputs(schedule, layout, profile, seed)
    penalty = build_penalty_matrix(schedule, layout, config)
    result = penalized_attention(inputs, penalty)

    n_prompts = len(schedule.prompt_ids)
    cols = _owner_columns(schedule, layout)
    grouped = np.stack([result.weights[:, cols == c].sum(axis=1) for c in range(n_prompts)], axis=1)
    if not np.allclose(result.output, grouped, rtol=0.0, atol=1e-12):
        raise InvariantError("one-hot attention output differs from grouped weight sums")

    # group sums may overshoot 1 by an ulp
    mass = np.clip(_frame_mean(grouped, layout.query_frame, schedule.video_frames), 0.0, 1.0)
    return OccupancyTrace(schedule.prompt_ids, mass, config.mode)


def prior_occupancy(schedule: SegmentSchedule, layout: TokenLayout, config: PenaltyConfig) -> np.ndarray:
    """Closed-form occupancy under uniform logits.

    With all logits equal, a frame's mass on prompt ``s`` is
    ``n_s * exp(-C_s) / sum_t n_t * exp(-C_t)``, where ``n`` counts keys.
    """
    frames = np.arange(schedule.video_frames)
    prior = np.exp(-owner_penalties(schedule, frames, config))
    counts = layout.key_counts()
    n = np.array([counts.get(s.segment_id, 0) for s in schedule.segments], dtype=np.float64)
    weighted = prior * n
    if schedule.global_prompt_id is not None:
        weighted = np.hstack([weighted, np.full((len(frames), 1), float(counts.get(GLOBAL, 0)))])
    return weighted / weighted.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class BoundaryReport:
    max_step: float
    per_boundary_steps: tuple[float, ...] = field(default_factory=tuple)
    mode: Mode = Mode.SOFT


def frame_steps(trace: OccupancyTrace) -> np.ndarray:
    """L1 distance between each pair of consecutive occupancy rows."""
    return np.abs(np.diff(trace.mass, axis=0)).sum(axis=1)


def boundary_report(trace: OccupancyTrace, schedule: SegmentSchedule) -> BoundaryReport:
    if trace.frames != schedule.video_frames:
        raise ValueError(f"trace has {trace.frames} frames, schedule has {schedule.video_frames}")
    steps = frame_steps(trace)
    max_step = float(steps.max()) if steps.size else 0.0
    per_boundary = tuple(float(steps[s.end_frame]) for s in schedule.segments[:-1])
    return BoundaryReport(max_step, per_boundary, trace.mode)
