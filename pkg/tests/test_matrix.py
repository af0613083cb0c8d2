import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import triple_loop_matmul
from promptrelay import DegenerateRowError, ShapeError, matmul, row_softmax


def test_matmul_identity():
    np.testing.assert_array_equal(matmul([[1, 0], [0, 1]], [[3, 4], [5, 6]]), [[3, 4], [5, 6]])


def test_matmul_row_by_column():
    np.testing.assert_array_equal(matmul([[1, 2]], [[3], [4]]), [[11]])


def test_matmul_matches_triple_loop_8x8():
    rng = np.random.default_rng(7)
    a, b = rng.standard_normal((8, 8)), rng.standard_normal((8, 8))
    np.testing.assert_allclose(matmul(a, b), triple_loop_matmul(a, b), rtol=0, atol=1e-12)


def test_matmul_all_shapes_up_to_16():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n, k, m = rng.integers(1, 17, size=3)
        a, b = rng.standard_normal((n, k)), rng.standard_normal((k, m))
        np.testing.assert_allclose(matmul(a, b), triple_loop_matmul(a, b), rtol=0, atol=1e-12)


def test_matmul_shape_error_names_both_shapes():
    with pytest.raises(ShapeError, match=r"2x3 by 2x2"):
        matmul(np.ones((2, 3)), np.ones((2, 2)))


def test_matmul_rejects_infinite_operands():
    with pytest.raises(ValueError):
        matmul([[math.inf]], [[1.0]])


@pytest.mark.parametrize(
    "row, expected",
    [
        ([0.0, 0.0], [0.5, 0.5]),
        ([0.0, -math.inf], [1.0, 0.0]),
        ([1000.0, 1001.0], [0.2689414213699951, 0.7310585786300049]),
    ],
)
def test_row_softmax_examples(row, expected):
    np.testing.assert_allclose(row_softmax([row])[0], expected, rtol=0, atol=1e-12)


def test_masked_entry_is_exactly_zero():
    assert row_softmax([[3.0, -math.inf, 1.0]])[0, 1] == 0.0


def test_all_blocked_row_reports_index():
    with pytest.raises(DegenerateRowError) as info:
        row_softmax([[0.0, 1.0], [-math.inf, -math.inf]])
    assert info.value.row == 1


@pytest.mark.parametrize("bad", [math.nan, math.inf])
def test_row_softmax_rejects_nan_and_posinf(bad):
    with pytest.raises(ValueError):
        row_softmax([[0.0, bad]])


finite_rows = arrays(
    np.float64,
    st.tuples(st.integers(1, 6), st.integers(1, 12)),
    elements=st.floats(-1e4, 1e4, allow_nan=False, allow_infinity=False),
)


moderate_rows = arrays(
    np.float64,
    st.tuples(st.integers(1, 6), st.integers(1, 12)),
    elements=st.floats(-100, 100, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=200, deadline=None)
@given(moderate_rows, st.data())
def test_shift_invariance(logits, data):
    # one constant per row; magnitudes kept where the shift itself rounds below 1e-12
    c = data.draw(arrays(np.float64, (logits.shape[0], 1), elements=st.floats(-100, 100)))
    shifted = logits + c
    np.testing.assert_allclose(row_softmax(shifted), row_softmax(logits), rtol=0, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite_rows)
def test_rows_are_distributions(logits):
    p = row_softmax(logits)
    assert not np.isnan(p).any()
    assert ((p >= 0) & (p <= 1)).all()
    np.testing.assert_allclose(p.sum(axis=1), 1.0, rtol=0, atol=1e-9)
