"""Which prompt does each frame listen to?

Run:  python demos/02_routing_occupancy.py

Three events share a 21-frame latent video, plus a global prompt that stays
active throughout. Value vectors are one-hot per prompt, so the attention
output of a frame is directly its share of attention per prompt.
"""

import numpy as np

from promptrelay import PenaltyConfig, build_token_layout, occupancy, validate_schedule

schedule = validate_schedule(
    {
        "video_frames": 21,
        "global_prompt": "kitchen",
        "segments": [("cereal", 0, 6), ("milk", 7, 13), ("eat", 14, 20)],
    }
)
layout = build_token_layout(schedule, tokens_per_frame=4, tokens_per_prompt=8, global_tokens=8)

for mode in ("off", "hard", "soft"):
    trace = occupancy(schedule, layout, PenaltyConfig(mode=mode))
    print(f"\nmode={mode}")
    print("frame " + " ".join(f"{p:>8}" for p in trace.prompts))
    for f, row in enumerate(trace.mass):
        print(f"{f:5d} " + " ".join(f"{x:8.3f}" for x in row))

# %% Random logits: routing still dominates the embedding noise
trace = occupancy(schedule, layout, PenaltyConfig(), profile="random", seed=0)
winners = np.argmax(trace.mass[:, :3], axis=1)
print("\nrandom logits, dominant local prompt per frame:")
print(" ".join(trace.prompts[k] for k in winners))
