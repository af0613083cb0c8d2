"""Soft decay vs hard masking at segment boundaries.

Run:  python demos/03_soft_vs_hard.py

Hard masking flips a frame's occupancy from one prompt to the next in a
single step (L1 jump of 2). The Gaussian decay hands over gradually, so the
largest frame-to-frame jump is smaller. Lower epsilon approaches the hard
mask.
"""

from promptrelay import PenaltyConfig, boundary_report, build_token_layout, occupancy, validate_schedule

schedule = validate_schedule({"video_frames": 24, "segments": [("a", 0, 7), ("b", 8, 15), ("c", 16, 23)]})
layout = build_token_layout(schedule, tokens_per_frame=2, tokens_per_prompt=6)

hard = boundary_report(occupancy(schedule, layout, PenaltyConfig(mode="hard")), schedule)
print(f"hard            max_step={hard.max_step:.4f}  boundaries={[round(s, 4) for s in hard.per_boundary_steps]}")
for eps in (0.3, 0.1, 0.01, 1e-6, 1e-12):
    soft = boundary_report(occupancy(schedule, layout, PenaltyConfig(eps)), schedule)
    print(f"soft eps={eps:<6g} max_step={soft.max_step:.4f}  boundaries={[round(s, 4) for s in soft.per_boundary_steps]}")

# %% Wider free window: L - w shrinks, so the decay steepens and the handoff sharpens
for window in (0.0, 1.5, 3.0):
    soft = boundary_report(occupancy(schedule, layout, PenaltyConfig(0.1, window)), schedule)
    print(f"soft w={window:<4g}      max_step={soft.max_step:.4f}")
