"""Reference gesture CNN, training loop and evaluation metrics.

The reference architecture stacks six stride-2 convolutions whose kernels
halve layer by layer (64 down to 2), then two dense layers behind dropout.
At full width (512 filters, 64 dense units) it owns 16,650,255 trainable
parameters; the width arguments exist so tests and small machines can train
scaled-down variants of the same stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dataset import WindowSet
from .gestures import NUM_GESTURES, one_hot_batch
from .nn import (
    AdamConfig,
    Conv1d,
    Dense,
    Dropout,
    Flatten,
    NetworkSpec,
    ParameterStore,
    Relu,
    Softmax,
    adam_step,
    forward,
    init_adam,
    init_params,
    loss_and_grads,
)
from .validation import check_labels, check_non_negative_int, check_positive_int, check_window_batch

CONV_KERNELS = (64, 32, 16, 8, 4, 2)


def build_gesture_cnn(
    window_len: int = 200,
    channels: int = 8,
    conv_filters: int = 512,
    dense_units: int = 64,
    num_classes: int = NUM_GESTURES,
    dropout_rate: float = 0.5,
) -> NetworkSpec:
    """The raw-EMG gesture classifier: 6 stride-2 conv layers with shrinking
    kernels, flatten, then dropout-dense-relu-dropout-dense-softmax."""
    layers: list = []
    for kernel in CONV_KERNELS:
        layers.append(Conv1d(filters=conv_filters, kernel=kernel, stride=2))
        layers.append(Relu())
    layers += [
        Flatten(),
        Dropout(dropout_rate),
        Dense(dense_units),
        Relu(),
        Dropout(dropout_rate),
        Dense(num_classes),
        Softmax(),
    ]
    return NetworkSpec(input_shape=(window_len, channels), layers=tuple(layers))


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.0001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-08
    batch_size: int = 4096
    epochs: int = 200
    dropout_rate: float = 0.5
    seed: int = 0

    def __post_init__(self):
        check_positive_int("batch_size", self.batch_size)
        check_non_negative_int("epochs", self.epochs)
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")

    def adam(self) -> AdamConfig:
        return AdamConfig(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
        )


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    train_acc: float
    val_acc: float


def history_line(stats: EpochStats) -> str:
    return (
        f"epoch,{stats.epoch},train_loss,{stats.train_loss:.6f},"
        f"train_acc,{stats.train_acc:.6f},val_acc,{stats.val_acc:.6f}"
    )


@dataclass
class Metrics:
    accuracy: float
    confusion: np.ndarray
    history: list[EpochStats] = field(default_factory=list)


def dropout_rng(seed: int, epoch: int, batch_index: int) -> np.random.Generator:
    """Counter-based generator so a batch's masks depend only on these ids."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, (epoch << 32) | batch_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


Batches = WindowSet | tuple[np.ndarray, np.ndarray]


def _as_arrays(data: Batches) -> tuple[np.ndarray | None, np.ndarray, int]:
    """Normalize a WindowSet or (X, y) pair to (X or None, labels, count)."""
    if isinstance(data, WindowSet):
        return None, data.labels, len(data)
    X, y = data
    X = check_window_batch(X)
    y = check_labels(y, X.shape[0])
    return X, y, X.shape[0]


def _gather(data: Batches, X, idx: np.ndarray) -> np.ndarray:
    if X is not None:
        return X[idx]
    return data.gather(idx)


def train(
    spec: NetworkSpec,
    train_set: Batches,
    val_set: Batches | None,
    config: TrainingConfig,
    on_epoch: Callable[[EpochStats], None] | None = None,
) -> tuple[ParameterStore, Metrics]:
    """Adam training with seeded per-epoch shuffles; short final batches kept.

    Fully deterministic for a fixed config: init, shuffles and dropout masks
    all derive from config.seed.
    """
    num_classes = spec.output_dim
    X_train, y_train, n = _as_arrays(train_set)
    if n == 0:
        raise ValueError("training set is empty")
    check_labels(y_train, n, num_classes)

    params = init_params(spec, seed=config.seed)
    state = init_adam(params, config.adam())
    shuffler = np.random.default_rng(config.seed)
    history: list[EpochStats] = []
    has_dropout = any(isinstance(l, Dropout) and l.rate > 0 for l in spec.layers)

    for epoch in range(config.epochs):
        order = shuffler.permutation(n)
        epoch_loss = 0.0
        epoch_hits = 0
        for b, i in enumerate(range(0, n, config.batch_size)):
            idx = order[i : i + config.batch_size]
            Xb = _gather(train_set, X_train, idx)
            Yb = one_hot_batch(y_train[idx], num_classes)
            rng = dropout_rng(config.seed, epoch, b) if has_dropout else None
            loss, grads, probs = loss_and_grads(
                spec, params, Xb, Yb, rng=rng, mode="train", with_probs=True
            )
            params, state = adam_step(params, grads, state)
            epoch_loss += loss * idx.shape[0]
            epoch_hits += int((probs.argmax(axis=1) == y_train[idx]).sum())
        val_acc = float("nan")
        if val_set is not None:
            val_acc = evaluate(spec, params, val_set).accuracy
        stats = EpochStats(
            epoch=epoch,
            train_loss=epoch_loss / n,
            train_acc=epoch_hits / n,
            val_acc=val_acc,
        )
        history.append(stats)
        if on_epoch is not None:
            on_epoch(stats)

    final = evaluate(spec, params, val_set if val_set is not None else train_set)
    return params, Metrics(accuracy=final.accuracy, confusion=final.confusion, history=history)


def predict_proba_batched(
    spec: NetworkSpec,
    params: ParameterStore,
    data: Batches,
    batch_size: int = 256,
) -> np.ndarray:
    X, _, n = _as_arrays(data)
    out = np.empty((n, spec.output_dim), dtype=np.float32)
    for i in range(0, n, batch_size):
        idx = np.arange(i, min(i + batch_size, n))
        Xb = _gather(data, X, idx)
        probs, _ = forward(spec, params, np.asarray(Xb, dtype=np.float32), mode="infer")
        out[i : i + idx.shape[0]] = probs
    return out


def evaluate(spec: NetworkSpec, params: ParameterStore, data: Batches) -> Metrics:
    """Inference-mode accuracy and confusion counts over a labeled window set."""
    _, labels, n = _as_arrays(data)
    if n == 0:
        raise ValueError("evaluation set is empty")
    num_classes = spec.output_dim
    check_labels(labels, n, num_classes)
    probs = predict_proba_batched(spec, params, data)
    preds = probs.argmax(axis=1)
    confusion = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(confusion, (labels, preds), 1)
    accuracy = float(np.trace(confusion) / n)
    return Metrics(accuracy=accuracy, confusion=confusion)
