"""Retained attention fraction around a segment midpoint.

Run:  python demos/01_decay_curves.py

A query at frame offset ``o`` from a segment's midpoint keeps the fraction
exp(-C) of its unnormalized attention to that segment's prompt. Inside the
free window (|o| <= w) nothing is lost; past it the fraction falls like a
Gaussian and hits epsilon exactly at the segment endpoints (|o| = L).
"""

import numpy as np

from promptrelay import decay_curve, sigma_for

L = 8.0
offsets = np.arange(0, 12.5, 1.0)

# %% Window sweep at the default epsilon = 0.1
print("offset " + " ".join(f"{'w=' + format(w, 'g'):>8}" for w in (0, L / 2, L - 2)))
curves = [decay_curve(L, w, 0.1, offsets).retained_fraction for w in (0, L / 2, L - 2)]
for k, o in enumerate(offsets):
    print(f"{o:6g} " + " ".join(f"{c[k]:8.4f}" for c in curves))

# With w = L - 2 the decay width no longer depends on L at all.
for half in (3.0, 8.0, 40.0):
    print(f"L={half:5g}  sigma={sigma_for(half, half - 2, 0.1):.6f}")

# %% Epsilon sweep at w = L - 2
print()
print("offset " + " ".join(f"{'eps=' + format(e, 'g'):>9}" for e in (0.3, 0.1, 0.01)))
curves = [decay_curve(L, L - 2, e, offsets).retained_fraction for e in (0.3, 0.1, 0.01)]
for k, o in enumerate(offsets):
    print(f"{o:6g} " + " ".join(f"{c[k]:9.5f}" for c in curves))
