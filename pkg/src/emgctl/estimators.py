"""scikit-learn style facade over the windowing + CNN core.

These classes follow the estimator protocol (constructor params stored
verbatim, get_params/set_params from BaseEstimator, fitted state in
trailing-underscore attributes) so they clone and compose inside sklearn
pipelines and searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .classifier import Metrics, TrainingConfig, build_gesture_cnn, evaluate, predict_proba_batched, train
from .nn import save_params_file
from .records import EmgRecord, window_batch, window_starts
from .validation import as_sample_matrix, check_labels, check_window_batch


class WindowSlicer(BaseEstimator, TransformerMixin):
    """Stateless transformer: raw [num_samples, channels] signal (or an
    EmgRecord) in, stacked [n_windows, window_len, channels] slices out."""

    def __init__(self, window_len: int = 200, stride: int = 20):
        self.window_len = window_len
        self.stride = stride

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        samples = X.samples if isinstance(X, EmgRecord) else as_sample_matrix(X)
        starts = window_starts(samples.shape[0], self.window_len, self.stride)
        return window_batch(samples, starts, self.window_len)


class GestureCnnClassifier(BaseEstimator, ClassifierMixin):
    """The shrinking-kernel gesture CNN behind fit/predict.

    Widths default to the full-scale stack (512 conv filters, 64 dense
    units); turn them down for anything interactive. Training is
    deterministic for a fixed seed.
    """

    def __init__(
        self,
        conv_filters: int = 512,
        dense_units: int = 64,
        dropout_rate: float = 0.5,
        learning_rate: float = 0.0001,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-08,
        batch_size: int = 4096,
        epochs: int = 200,
        seed: int = 0,
    ):
        self.conv_filters = conv_filters
        self.dense_units = dense_units
        self.dropout_rate = dropout_rate
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.batch_size = batch_size
        self.epochs = epochs
        self.seed = seed

    def _training_config(self) -> TrainingConfig:
        return TrainingConfig(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            batch_size=self.batch_size,
            epochs=self.epochs,
            dropout_rate=self.dropout_rate,
            seed=self.seed,
        )

    def fit(self, X, y, validation=None, on_epoch=None):
        """Train on windows X [n, window_len, channels] and integer labels y.

        ``validation`` is an optional (X, y) pair evaluated after each epoch.
        """
        X = check_window_batch(X)
        y = check_labels(y, X.shape[0])
        self.classes_ = np.unique(y)
        index_of = {c: i for i, c in enumerate(self.classes_)}
        y_idx = np.array([index_of[c] for c in y], dtype=np.int64)

        self.network_ = build_gesture_cnn(
            window_len=X.shape[1],
            channels=X.shape[2],
            conv_filters=self.conv_filters,
            dense_units=self.dense_units,
            num_classes=len(self.classes_),
            dropout_rate=self.dropout_rate,
        )
        val = None
        if validation is not None:
            Xv = check_window_batch(validation[0], X.shape[1], X.shape[2])
            yv = check_labels(validation[1], Xv.shape[0])
            unseen = set(yv.tolist()) - set(self.classes_.tolist())
            if unseen:
                raise ValueError(f"validation labels {sorted(unseen)} never appear in y")
            val = (Xv, np.array([index_of[c] for c in yv], dtype=np.int64))
        self.params_, self.metrics_ = train(
            self.network_, (X, y_idx), val, self._training_config(), on_epoch=on_epoch
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise RuntimeError("estimator is not fitted; call fit first")

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_window_batch(X, self.network_.input_shape[0], self.network_.input_shape[1])
        dummy = np.zeros(X.shape[0], dtype=np.int64)
        return predict_proba_batched(self.network_, self.params_, (X, dummy))

    def predict(self, X) -> np.ndarray:
        proba = self.predict_proba(X)
        return self.classes_[proba.argmax(axis=1)]

    def evaluate(self, X, y) -> Metrics:
        """Accuracy plus the full confusion matrix, labels in classes_ order."""
        self._check_fitted()
        X = check_window_batch(X, self.network_.input_shape[0], self.network_.input_shape[1])
        y = check_labels(y, X.shape[0])
        index_of = {c: i for i, c in enumerate(self.classes_)}
        y_idx = np.array([index_of[c] for c in y], dtype=np.int64)
        return evaluate(self.network_, self.params_, (X, y_idx))

    def save_weights(self, path) -> None:
        self._check_fitted()
        save_params_file(self.network_, self.params_, path)
