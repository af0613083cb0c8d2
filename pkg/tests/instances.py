"""Seeded random attention instances with schedule-derived penalties."""

import numpy as np

from promptrelay import AttentionInputs, PenaltyConfig, build_penalty_matrix, build_token_layout, validate_schedule


def random_schedule(rng, max_frames=16):
    n_seg = int(rng.integers(1, 5))
    lengths = rng.integers(2, 6, size=n_seg)
    while lengths.sum() > max_frames:
        lengths[np.argmax(lengths)] -= 1
    segments, start = [], 0
    for k, n in enumerate(lengths.tolist()):
        segments.append((f"p{k}", start, start + n - 1))
        start += n
    raw = {"video_frames": start, "segments": segments}
    if rng.random() < 0.5:
        raw["global_prompt"] = "g"
    return validate_schedule(raw)


def random_instance(seed, mode="soft", max_queries=32, max_keys=64):
    """Schedule, layout, inputs and penalty with at most 32 queries and 64 keys."""
    rng = np.random.default_rng(seed)
    sched = random_schedule(rng)
    tpf = max(1, int(rng.integers(1, max_queries // sched.video_frames + 1)))
    n_prompts = len(sched.prompt_ids)
    per_prompt = int(rng.integers(1, max_keys // n_prompts + 1))
    g = per_prompt if sched.global_prompt_id else 0
    layout = build_token_layout(sched, tpf, per_prompt, g)
    d = int(rng.integers(1, 9))
    scale = rng.uniform(0.1, 4.0)
    inputs = AttentionInputs(
        rng.standard_normal((layout.query_count, d)) * scale,
        rng.standard_normal((layout.key_count, d)) * scale,
        rng.standard_normal((layout.key_count, int(rng.integers(1, 6)))),
    )
    eps = float(rng.choice([0.3, 0.1, 0.01, 1e-6]))
    penalty = build_penalty_matrix(sched, layout, PenaltyConfig(eps, "auto", mode))
    assert layout.query_count <= max_queries and layout.key_count <= max_keys
    return sched, layout, inputs, penalty
