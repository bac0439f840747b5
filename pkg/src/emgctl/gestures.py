"""The 15 finger-flexion gesture classes and label encoding."""

from __future__ import annotations

from enum import IntEnum

import numpy as np

NUM_GESTURES = 15


class GestureClass(IntEnum):
    THUMB = 0
    INDEX = 1
    MIDDLE = 2
    RING = 3
    LITTLE = 4
    THUMB_INDEX = 5
    THUMB_MIDDLE = 6
    THUMB_RING = 7
    THUMB_LITTLE = 8
    HAND_CLOSE = 9
    INDEX_MIDDLE = 10
    MIDDLE_RING = 11
    RING_LITTLE = 12
    INDEX_MIDDLE_RING = 13
    MIDDLE_RING_LITTLE = 14

    @property
    def label(self) -> str:
        return GESTURE_LABELS[self]


GESTURE_LABELS = (
    "Thumb",
    "Index",
    "Middle",
    "Ring",
    "Little",
    "Thumb-Index",
    "Thumb-Middle",
    "Thumb-Ring",
    "Thumb-Little",
    "Hand Close",
    "Index-Middle",
    "Middle-Ring",
    "Ring-Little",
    "Index-Middle-Ring",
    "Middle-Ring-Little",
)


def one_hot(index: int, num_classes: int = NUM_GESTURES) -> np.ndarray:
    """Target vector with a single 1 at the class index."""
    index = int(index)
    if not 0 <= index < num_classes:
        raise ValueError(f"class index {index} out of range for {num_classes} classes")
    vec = np.zeros(num_classes, dtype=np.float32)
    vec[index] = 1.0
    return vec


def one_hot_batch(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise ValueError("label out of range")
    out = np.zeros((labels.shape[0], num_classes), dtype=np.float32)
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def predict_class(probs) -> int:
    """Argmax class index; ties break toward the lowest index."""
    probs = np.asarray(probs)
    if probs.ndim != 1 or probs.shape[0] < 1:
        raise ValueError("probabilities must be a non-empty vector")
    return int(np.argmax(probs))
