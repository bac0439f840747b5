"""Layer specs and forward/backward kernels, all plain numpy.

Convolutions lower to an im2col patch matrix and a single GEMM; patch rows
are laid out kernel-position-major, channel-minor, matching the [kernel,
in_channels, filters] weight layout. Every kernel preserves the dtype it is
handed, so the same code path runs float32 in production and float64 under
the gradient checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..validation import check_positive_int


@dataclass(frozen=True)
class Conv1d:
    filters: int
    kernel: int
    stride: int = 1

    def __post_init__(self):
        check_positive_int("filters", self.filters)
        check_positive_int("kernel", self.kernel)
        check_positive_int("stride", self.stride)


@dataclass(frozen=True)
class Dense:
    units: int

    def __post_init__(self):
        check_positive_int("units", self.units)


@dataclass(frozen=True)
class Relu:
    pass


@dataclass(frozen=True)
class Dropout:
    rate: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {self.rate}")


@dataclass(frozen=True)
class Flatten:
    pass


@dataclass(frozen=True)
class Softmax:
    pass


LayerSpec = Union[Conv1d, Dense, Relu, Dropout, Flatten, Softmax]


def same_pad(in_len: int, kernel: int, stride: int) -> tuple[int, int, int]:
    """Zero-padding for ceil-division SAME convolutions.

    out_len = ceil(in_len / stride); when the total padding is odd the extra
    zero goes on the right.
    """
    if in_len < 1:
        raise ValueError(f"in_len must be >= 1, got {in_len}")
    out_len = -(-in_len // stride)
    total = max((out_len - 1) * stride + kernel - in_len, 0)
    pad_left = total // 2
    return pad_left, total - pad_left, out_len


def _patch_indices(out_len: int, kernel: int, stride: int) -> np.ndarray:
    return (np.arange(out_len) * stride)[:, None] + np.arange(kernel)[None, :]


def conv1d_forward(spec: Conv1d, weights: np.ndarray, biases: np.ndarray, x: np.ndarray):
    """x [B, L, C] -> out [B, out_len, filters], plus the cache backward needs."""
    b, in_len, c_in = x.shape
    if weights.shape != (spec.kernel, c_in, spec.filters):
        raise ValueError(
            f"conv weights shaped {weights.shape}, expected {(spec.kernel, c_in, spec.filters)}"
        )
    if biases.shape != (spec.filters,):
        raise ValueError(f"conv biases shaped {biases.shape}, expected {(spec.filters,)}")
    pad_left, pad_right, out_len = same_pad(in_len, spec.kernel, spec.stride)
    xp = np.pad(x, ((0, 0), (pad_left, pad_right), (0, 0)))
    patches = xp[:, _patch_indices(out_len, spec.kernel, spec.stride), :]
    pm = np.ascontiguousarray(patches).reshape(b * out_len, spec.kernel * c_in)
    w2 = weights.reshape(spec.kernel * c_in, spec.filters)
    out = (pm @ w2 + biases).reshape(b, out_len, spec.filters)
    cache = (pm, (b, in_len, c_in), (pad_left, pad_right, out_len))
    return out, cache


def conv1d_backward(spec: Conv1d, weights: np.ndarray, cache, dout: np.ndarray):
    pm, (b, in_len, c_in), (pad_left, pad_right, out_len) = cache
    g = dout.reshape(b * out_len, spec.filters)
    db = g.sum(axis=0)
    dw = (pm.T @ g).reshape(spec.kernel, c_in, spec.filters)
    w2 = weights.reshape(spec.kernel * c_in, spec.filters)
    dpatches = (g @ w2.T).reshape(b, out_len, spec.kernel, c_in)
    dxp = np.zeros((b, pad_left + in_len + pad_right, c_in), dtype=dout.dtype)
    for k in range(spec.kernel):
        dxp[:, k : k + spec.stride * out_len : spec.stride, :] += dpatches[:, :, k, :]
    dx = dxp[:, pad_left : pad_left + in_len, :]
    return dw, db, dx


def dense_forward(spec: Dense, weights: np.ndarray, biases: np.ndarray, x: np.ndarray):
    if x.ndim != 2 or weights.shape[0] != x.shape[1] or weights.shape[1] != spec.units:
        raise ValueError(
            f"dense weights shaped {weights.shape} cannot apply to input {x.shape}"
        )
    if biases.shape != (spec.units,):
        raise ValueError(f"dense biases shaped {biases.shape}, expected {(spec.units,)}")
    return x @ weights + biases, x


def dense_backward(weights: np.ndarray, cache, dout: np.ndarray):
    x = cache
    return x.T @ dout, dout.sum(axis=0), dout @ weights.T


def relu_forward(x: np.ndarray):
    return np.maximum(x, 0), x


def relu_backward(cache, dout: np.ndarray):
    return dout * (cache > 0)


def dropout_forward(spec: Dropout, x: np.ndarray, train: bool, rng):
    """Inverted dropout: survivors scale by 1/(1-rate); inference is identity."""
    if not train or spec.rate == 0.0:
        return x, None
    if rng is None:
        raise ValueError("training-mode dropout needs an rng")
    keep = (rng.random(x.shape) >= spec.rate).astype(x.dtype)
    scale = x.dtype.type(1.0 / (1.0 - spec.rate))
    mask = keep * scale
    return x * mask, mask


def dropout_backward(cache, dout: np.ndarray):
    if cache is None:
        return dout
    return dout * cache


def softmax(logits: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax along the last axis; rows sum to 1."""
    logits = np.asarray(logits)
    if not np.isfinite(logits).all():
        raise ValueError("softmax input must be finite")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax_backward(probs: np.ndarray, dout: np.ndarray) -> np.ndarray:
    inner = (dout * probs).sum(axis=-1, keepdims=True)
    return probs * (dout - inner)
