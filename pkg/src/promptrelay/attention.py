"""Single-head cross-attention, plain and penalized.

Queries come from the video latent, keys and values from prompt tokens. The
learned projections are the caller's business: pass Q, K and V directly.
Multi-head use is a loop over heads sharing one :class:`PenaltyMatrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRowError, FullyBlockedQueryError, ShapeError
from .matrix import as_matrix, matmul, row_softmax
from .penalty import PenaltyMatrix


@dataclass(frozen=True, eq=False)
class AttentionInputs:
    q: np.ndarray
    k: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        q = as_matrix(self.q, name="Q")
        k = as_matrix(self.k, name="K")
        v = as_matrix(self.v, name="V")
        if q.shape[1] != k.shape[1] or q.shape[1] < 1:
            raise ShapeError(f"Q is {q.shape} and K is {k.shape}; need equal, non-zero widths")
        if k.shape[0] != v.shape[0]:
            raise ShapeError(f"K has {k.shape[0]} rows but V has {v.shape[0]}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", v)

    @property
    def d(self) -> int:
        return self.q.shape[1]

    @property
    def query_count(self) -> int:
        return self.q.shape[0]

    @property
    def key_count(self) -> int:
        return self.k.shape[0]

    def logits(self) -> np.ndarray:
        return matmul(self.q, self.k.T) / math.sqrt(self.d)


@dataclass(frozen=True, eq=False)
class AttentionOutput:
    output: np.ndarray
    weights: np.ndarray


def attention(inputs: AttentionInputs) -> AttentionOutput:
    weights = row_softmax(inputs.logits())
    return AttentionOutput(matmul(weights, inputs.v), weights)


def _check_penalty(inputs: AttentionInputs, penalty: PenaltyMatrix) -> np.ndarray:
    c = penalty.values
    if c.shape != (inputs.query_count, inputs.key_count):
        raise ShapeError(
            f"penalty is {c.shape[0]}x{c.shape[1]} but attention needs "
            f"{inputs.query_count}x{inputs.key_count}"
        )
    return c


def _blocked(penalty: PenaltyMatrix, row: int) -> FullyBlockedQueryError:
    frame = None if penalty.query_frame is None else int(penalty.query_frame[row])
    return FullyBlockedQueryError(row, frame)


def penalized_attention(inputs: AttentionInputs, penalty: PenaltyMatrix) -> AttentionOutput:
    """Attention with ``C`` subtracted from the scaled logits before the softmax."""
    c = _check_penalty(inputs, penalty)
    scores = inputs.logits()
    # inf - finite is resolved up front so no NaN can appear
    logits = np.where(np.isposinf(c), -np.inf, scores - c)
    try:
        weights = row_softmax(logits)
    except DegenerateRowError as exc:
        raise _blocked(penalty, exc.row) from None
    return AttentionOutput(matmul(weights, inputs.v), weights)


def prior_multiplier_oracle(inputs: AttentionInputs, penalty: PenaltyMatrix) -> AttentionOutput:
    """Same result as :func:`penalized_attention`, computed another way.

    Unnormalized scores ``exp(logits - rowmax)`` are multiplied by the prior
    ``exp(-C)`` and each row is divided by its sum. Used for cross-checking.
    """
    c = _check_penalty(inputs, penalty)
    q, k, v = inputs.q, inputs.k, inputs.v
    logits = np.einsum("id,jd->ij", q, k) / math.sqrt(inputs.d)
    scores = np.exp(logits - logits.max(axis=1, keepdims=True))
    prior = np.exp(-c)
    unnormalized = scores * prior
    totals = unnormalized.sum(axis=1)
    empty = np.flatnonzero(totals == 0.0)
    if empty.size:
        raise _blocked(penalty, int(empty[0]))
    weights = unnormalized / totals[:, None]
    output = np.einsum("ij,jv->iv", weights, v)
    return AttentionOutput(output, weights)
