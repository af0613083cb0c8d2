"""Dense float64 matrix helpers: a checked product and a stable row softmax.

Matrices are plain 2-D ``numpy.ndarray`` objects in C (row-major) order with
dtype ``float64``. ``+inf`` is tolerated only as a penalty sentinel and never
survives into attention weights.
"""

import numpy as np

from .errors import DegenerateRowError, ShapeError


def as_matrix(x, *, name: str = "matrix") -> np.ndarray:
    """Return `x` as a C-ordered float64 2-D array (no copy when possible)."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, name="left operand")
    b = as_matrix(b, name="right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("matmul operands must be finite")
    return a @ b


def row_softmax(logits) -> np.ndarray:
    """Softmax along each row after subtracting the row max.

    ``-inf`` entries map to exactly 0. A row made only of ``-inf`` raises
    :class:`DegenerateRowError` with its index.
    """
    x = as_matrix(logits, name="logits")
    if np.isnan(x).any() or np.isposinf(x).any():
        raise ValueError("logits must not contain NaN or +inf")
    row_max = x.max(axis=1, keepdims=True)
    blocked = np.flatnonzero(np.isneginf(row_max[:, 0]))
    if blocked.size:
        raise DegenerateRowError(int(blocked[0]))
    e = np.exp(x - row_max)
    return e / e.sum(axis=1, keepdims=True)
