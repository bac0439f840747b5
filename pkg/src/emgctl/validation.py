"""Input validation helpers shared across the package.

Small, assert-like checks that raise ValueError with a usable message; the
estimator facade and the functional API both route inputs through these.
"""

from __future__ import annotations

import numpy as np


def check_positive_int(name: str, value) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_non_negative_int(name: str, value) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return int(value)


def check_probability(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {value}")
    return value


def check_odd(name: str, value) -> int:
    value = check_positive_int(name, value)
    if value % 2 == 0:
        raise ValueError(f"{name} must be odd, got {value}")
    return value


def as_sample_matrix(samples, dtype=np.float32) -> np.ndarray:
    """Coerce to a finite 2-D [num_samples, channels] float array."""
    arr = np.asarray(samples, dtype=dtype)
    if arr.ndim != 2:
        raise ValueError(f"samples must be 2-D [num_samples, channels], got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError("samples must have at least one channel")
    if not np.isfinite(arr).all():
        raise ValueError("samples contain non-finite values")
    return arr


def check_window_batch(X, window_len: int | None = None, channels: int | None = None) -> np.ndarray:
    """Coerce to [batch, window_len, channels] float32, promoting a single window."""
    X = np.asarray(X, dtype=np.float32)
    if X.ndim == 2:
        X = X[np.newaxis]
    if X.ndim != 3:
        raise ValueError(f"expected windows shaped [n, window_len, channels], got shape {X.shape}")
    if window_len is not None and X.shape[1] != window_len:
        raise ValueError(f"expected window length {window_len}, got {X.shape[1]}")
    if channels is not None and X.shape[2] != channels:
        raise ValueError(f"expected {channels} channels, got {X.shape[2]}")
    if not np.isfinite(X).all():
        raise ValueError("windows contain non-finite values")
    return X


def check_labels(y, n: int, num_classes: int | None = None) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n:
        raise ValueError(f"expected {n} labels, got shape {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        if not np.all(y == y.astype(np.int64)):
            raise ValueError("labels must be integers")
        y = y.astype(np.int64)
    y = y.astype(np.int64)
    if y.size and y.min() < 0:
        raise ValueError("labels must be non-negative")
    if num_classes is not None and y.size and y.max() >= num_classes:
        raise ValueError(f"label {y.max()} out of range for {num_classes} classes")
    return y
