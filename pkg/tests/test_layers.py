import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emgctl.nn import Conv1d, Dense, Dropout, same_pad, softmax
from emgctl.nn.layers import (
    conv1d_forward,
    dense_forward,
    dropout_forward,
    relu_forward,
)


def test_same_pad_examples():
    assert same_pad(200, 64, 2) == (31, 31, 100)
    assert same_pad(25, 16, 2) == (7, 8, 13)
    assert same_pad(7, 1, 1) == (0, 0, 7)


@given(L=st.integers(1, 300), k=st.integers(1, 70), s=st.integers(1, 8))
def test_same_pad_properties(L, k, s):
    pl, pr, out = same_pad(L, k, s)
    assert out == math.ceil(L / s)
    assert pl >= 0 and pr >= 0 and pr - pl in (0, 1)
    padded = pl + L + pr
    # brute-force count of kernel placements over the padded signal
    placements = 0
    start = 0
    while start + k <= padded:
        placements += 1
        start += s
    assert placements == out
    # padding is minimal: removing one zero loses a placement (when padded)
    if pl + pr > 0:
        assert (out - 1) * s + k == padded


def test_conv_zero_input_zero_bias():
    spec = Conv1d(filters=3, kernel=4, stride=2)
    w = np.random.default_rng(0).standard_normal((4, 2, 3))
    out, _ = conv1d_forward(spec, w, np.zeros(3), np.zeros((1, 10, 2)))
    assert not out.any()
    assert out.shape == (1, 5, 3)


def test_conv_identity_kernel():
    spec = Conv1d(filters=3, kernel=1, stride=1)
    w = np.eye(3)[np.newaxis]  # [1, 3, 3]
    x = np.random.default_rng(1).standard_normal((2, 6, 3))
    out, _ = conv1d_forward(spec, w, np.zeros(3), x)
    np.testing.assert_allclose(out, x, rtol=1e-6)


def test_conv_hand_computed():
    # [1,2,3,4] * kernel [1,1] stride 2, no padding by the formula
    spec = Conv1d(filters=1, kernel=2, stride=2)
    w = np.ones((2, 1, 1))
    x = np.array([[[1.0], [2.0], [3.0], [4.0]]])
    out, _ = conv1d_forward(spec, w, np.zeros(1), x)
    np.testing.assert_array_equal(out.ravel(), [3.0, 7.0])


def test_conv_matches_naive_loops():
    rng = np.random.default_rng(7)
    spec = Conv1d(filters=4, kernel=5, stride=2)
    x = rng.standard_normal((2, 11, 3))
    w = rng.standard_normal((5, 3, 4))
    b = rng.standard_normal(4)
    out, _ = conv1d_forward(spec, w, b, x)

    pl, pr, T = same_pad(11, 5, 2)
    xp = np.pad(x, ((0, 0), (pl, pr), (0, 0)))
    naive = np.zeros((2, T, 4))
    for n in range(2):
        for t in range(T):
            for f in range(4):
                acc = b[f]
                for k in range(5):
                    for c in range(3):
                        acc += w[k, c, f] * xp[n, t * 2 + k, c]
                naive[n, t, f] = acc
    np.testing.assert_allclose(out, naive, rtol=1e-12, atol=1e-12)


def test_conv_shape_mismatch_rejected():
    spec = Conv1d(filters=2, kernel=3, stride=1)
    with pytest.raises(ValueError):
        conv1d_forward(spec, np.zeros((3, 9, 2)), np.zeros(2), np.zeros((1, 8, 2)))


def test_dense_identity_and_zero():
    spec = Dense(units=4)
    x = np.random.default_rng(2).standard_normal((3, 4))
    out, _ = dense_forward(spec, np.eye(4), np.zeros(4), x)
    np.testing.assert_allclose(out, x)
    out, _ = dense_forward(spec, np.zeros((4, 4)), np.full(4, 2.5), x)
    np.testing.assert_allclose(out, np.full((3, 4), 2.5))


def test_dense_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        dense_forward(Dense(units=4), np.zeros((5, 4)), np.zeros(4), np.zeros((2, 3)))


def test_relu_idempotent_and_nonnegative():
    x = np.random.default_rng(3).standard_normal((4, 7))
    once, _ = relu_forward(x)
    twice, _ = relu_forward(once)
    np.testing.assert_array_equal(once, twice)
    assert (once >= 0).all()


def test_softmax_uniform():
    probs = softmax(np.zeros(15))
    np.testing.assert_allclose(probs, np.full(15, 1 / 15), rtol=1e-7)
    assert abs(probs.sum() - 1.0) < 1e-6


def test_softmax_analytic_pair():
    probs = softmax(np.array([0.0, math.log(2.0)]))
    np.testing.assert_allclose(probs, [1 / 3, 2 / 3], rtol=1e-12)


@given(
    logits=st.lists(st.floats(-30, 30), min_size=2, max_size=16),
    shift=st.floats(-50, 50),
)
def test_softmax_shift_invariance(logits, shift):
    z = np.array(logits)
    a = softmax(z)
    b = softmax(z + shift)
    np.testing.assert_allclose(a, b, atol=1e-9)
    assert (a > 0).all()
    assert abs(a.sum() - 1.0) < 1e-6


def test_softmax_rejects_non_finite():
    with pytest.raises(ValueError):
        softmax(np.array([0.0, np.inf]))


def test_dropout_infer_is_identity():
    x = np.random.default_rng(4).standard_normal((5, 9)).astype(np.float32)
    out, cache = dropout_forward(Dropout(0.5), x, train=False, rng=None)
    assert out is x and cache is None


def test_dropout_train_mask_and_scale():
    rng = np.random.default_rng(8)
    x = np.ones((2000, 10), dtype=np.float32)
    out, mask = dropout_forward(Dropout(0.25), x, train=True, rng=rng)
    vals = np.unique(out)
    np.testing.assert_allclose(sorted(vals), [0.0, 1.0 / 0.75], rtol=1e-6)
    drop_fraction = (out == 0).mean()
    assert abs(drop_fraction - 0.25) < 0.02
    np.testing.assert_array_equal(out, x * mask)


def test_dropout_requires_rng_in_train_mode():
    with pytest.raises(ValueError):
        dropout_forward(Dropout(0.5), np.ones((2, 2)), train=True, rng=None)


def test_dropout_expectation_matches_inference():
    # mean over many masks of dense(dropout(x)) converges to dense(x)
    rng = np.random.default_rng(123)
    x = rng.uniform(0.5, 2.0, size=16)
    w = rng.uniform(0.1, 1.0, size=(16, 4))
    tiled = np.tile(x, (100_000, 1))
    dropped, _ = dropout_forward(Dropout(0.5), tiled, train=True, rng=rng)
    sampled = (dropped @ w).mean(axis=0)
    exact = x @ w
    np.testing.assert_allclose(sampled, exact, rtol=0.01)
