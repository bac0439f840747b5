"""Network assembly: shape propagation, parameters, forward pass and backprop."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .layers import (
    Conv1d,
    Dense,
    Dropout,
    Flatten,
    LayerSpec,
    Relu,
    Softmax,
    conv1d_backward,
    conv1d_forward,
    dense_backward,
    dense_forward,
    dropout_backward,
    dropout_forward,
    log_softmax,
    relu_backward,
    relu_forward,
    same_pad,
    softmax,
)


class ShapeError(ValueError):
    """Layer cannot apply to the shape it was handed; carries the layer index."""

    def __init__(self, layer_index: int, message: str):
        super().__init__(f"layer {layer_index}: {message}")
        self.layer_index = layer_index


def _propagate(shape: tuple[int, ...], layer: LayerSpec, i: int) -> tuple[int, ...]:
    if isinstance(layer, Conv1d):
        if len(shape) != 2:
            raise ShapeError(i, f"conv1d needs a (length, channels) input, got {shape}")
        _, _, out_len = same_pad(shape[0], layer.kernel, layer.stride)
        return (out_len, layer.filters)
    if isinstance(layer, Dense):
        if len(shape) != 1:
            raise ShapeError(i, f"dense needs a flat input, got {shape}")
        return (layer.units,)
    if isinstance(layer, Flatten):
        return (int(np.prod(shape)),)
    if isinstance(layer, Softmax):
        if len(shape) != 1:
            raise ShapeError(i, f"softmax needs a flat input, got {shape}")
        return shape
    if isinstance(layer, (Relu, Dropout)):
        return shape
    raise ShapeError(i, f"unknown layer {layer!r}")


@dataclass(frozen=True)
class NetworkSpec:
    """Input shape plus an ordered layer list; construction validates shapes."""

    input_shape: tuple[int, int]
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "input_shape", tuple(self.input_shape))
        shapes = self.output_shapes()
        softmax_positions = [
            i for i, l in enumerate(self.layers) if isinstance(l, Softmax)
        ]
        if softmax_positions and softmax_positions != [len(self.layers) - 1]:
            raise ValueError("softmax must appear exactly once, as the last layer")
        del shapes

    def output_shapes(self) -> list[tuple[int, ...]]:
        """Shape after each layer, in order."""
        shape = self.input_shape
        out = []
        for i, layer in enumerate(self.layers):
            shape = _propagate(shape, layer, i)
            out.append(shape)
        return out

    @property
    def output_dim(self) -> int:
        shapes = self.output_shapes()
        last = shapes[-1] if shapes else self.input_shape
        if len(last) != 1:
            raise ValueError("network output is not a flat vector")
        return last[0]

    def trainable_layers(self) -> list[tuple[int, LayerSpec]]:
        return [
            (i, l) for i, l in enumerate(self.layers) if isinstance(l, (Conv1d, Dense))
        ]

    def canonical(self) -> str:
        """Canonical architecture string used for weight-file fingerprints."""
        parts = []
        for layer in self.layers:
            if isinstance(layer, Conv1d):
                parts.append(f"conv1d({layer.filters},{layer.kernel},{layer.stride})")
            elif isinstance(layer, Dense):
                parts.append(f"dense({layer.units})")
            elif isinstance(layer, Relu):
                parts.append("relu")
            elif isinstance(layer, Dropout):
                parts.append(f"dropout({layer.rate!r})")
            elif isinstance(layer, Flatten):
                parts.append("flatten")
            elif isinstance(layer, Softmax):
                parts.append("softmax")
        parts.append(f"in={self.input_shape[0]}x{self.input_shape[1]}")
        return ";".join(parts)


@dataclass
class LayerParams:
    weights: np.ndarray
    biases: np.ndarray


@dataclass
class ParameterStore:
    """Weights and biases for each trainable layer, in network order."""

    entries: list[LayerParams]

    def arrays(self) -> list[np.ndarray]:
        out = []
        for e in self.entries:
            out.append(e.weights)
            out.append(e.biases)
        return out

    @classmethod
    def from_arrays(cls, arrays: list[np.ndarray]) -> "ParameterStore":
        if len(arrays) % 2 != 0:
            raise ValueError("expected weight/bias pairs")
        return cls(
            entries=[LayerParams(arrays[i], arrays[i + 1]) for i in range(0, len(arrays), 2)]
        )

    def astype(self, dtype) -> "ParameterStore":
        return ParameterStore(
            entries=[
                LayerParams(e.weights.astype(dtype), e.biases.astype(dtype))
                for e in self.entries
            ]
        )

    def copy(self) -> "ParameterStore":
        return ParameterStore(
            entries=[LayerParams(e.weights.copy(), e.biases.copy()) for e in self.entries]
        )

    def zeros_like(self) -> "ParameterStore":
        return ParameterStore(
            entries=[
                LayerParams(np.zeros_like(e.weights), np.zeros_like(e.biases))
                for e in self.entries
            ]
        )

    def size(self) -> int:
        return sum(a.size for a in self.arrays())

    def allfinite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())

    def equals_bitwise(self, other: "ParameterStore") -> bool:
        mine, theirs = self.arrays(), other.arrays()
        if len(mine) != len(theirs):
            return False
        return all(
            a.shape == b.shape and a.tobytes() == b.tobytes()
            for a, b in zip(mine, theirs)
        )


def _expected_param_shapes(spec: NetworkSpec) -> list[tuple[tuple, tuple]]:
    shapes = []
    cur = spec.input_shape
    for i, layer in enumerate(spec.layers):
        if isinstance(layer, Conv1d):
            shapes.append(((layer.kernel, cur[1], layer.filters), (layer.filters,)))
        elif isinstance(layer, Dense):
            shapes.append(((cur[0], layer.units), (layer.units,)))
        cur = _propagate(cur, layer, i)
    return shapes


def init_params(spec: NetworkSpec, seed: int = 0, dtype=np.float32) -> ParameterStore:
    """Glorot-uniform weights (fan counts include the receptive field), zero biases."""
    rng = np.random.default_rng(seed)
    entries = []
    shapes = _expected_param_shapes(spec)
    for (wshape, bshape), (_, layer) in zip(shapes, spec.trainable_layers()):
        if isinstance(layer, Conv1d):
            fan_in = layer.kernel * wshape[1]
            fan_out = layer.kernel * layer.filters
        else:
            fan_in, fan_out = wshape
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights = rng.uniform(-limit, limit, size=wshape).astype(dtype)
        entries.append(LayerParams(weights, np.zeros(bshape, dtype=dtype)))
    return ParameterStore(entries=entries)


def check_params(spec: NetworkSpec, params: ParameterStore) -> None:
    expected = _expected_param_shapes(spec)
    if len(params.entries) != len(expected):
        raise ValueError(
            f"parameter store holds {len(params.entries)} layers, network has {len(expected)}"
        )
    for n, (entry, (wshape, bshape)) in enumerate(zip(params.entries, expected)):
        if entry.weights.shape != wshape or entry.biases.shape != bshape:
            raise ValueError(
                f"trainable layer {n}: parameters shaped "
                f"{entry.weights.shape}/{entry.biases.shape}, expected {wshape}/{bshape}"
            )


def parameter_count(spec: NetworkSpec) -> tuple[list[int], int]:
    """Per-layer trainable parameter counts (zeros for parameterless layers)."""
    counts = []
    cur = spec.input_shape
    for i, layer in enumerate(spec.layers):
        if isinstance(layer, Conv1d):
            counts.append(layer.kernel * cur[1] * layer.filters + layer.filters)
        elif isinstance(layer, Dense):
            counts.append(cur[0] * layer.units + layer.units)
        else:
            counts.append(0)
        cur = _propagate(cur, layer, i)
    return counts, sum(counts)


@dataclass
class ForwardTrace:
    """Per-layer caches from one forward pass, enough to run backward."""

    caches: list = field(default_factory=list)
    shapes: list = field(default_factory=list)
    logits: np.ndarray | None = None


def forward(
    spec: NetworkSpec,
    params: ParameterStore,
    x: np.ndarray,
    mode: str = "infer",
    rng=None,
):
    """Apply every layer in order.

    Accepts one window [L, C] or a batch [B, L, C]; single inputs come back
    squeezed. Dropout fires only in "train" mode and then requires an rng.
    Returns (output, ForwardTrace).
    """
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    check_params(spec, params)
    x = np.asarray(x)
    single = x.ndim == 2
    if single:
        x = x[np.newaxis]
    if x.ndim != 3 or x.shape[1:] != spec.input_shape:
        raise ShapeError(0, f"input shaped {x.shape[1:]}, network expects {spec.input_shape}")

    train = mode == "train"
    trace = ForwardTrace()
    h = x
    t = 0
    for i, layer in enumerate(spec.layers):
        if isinstance(layer, Conv1d):
            entry = params.entries[t]
            h, cache = conv1d_forward(layer, entry.weights, entry.biases, h)
            t += 1
        elif isinstance(layer, Dense):
            entry = params.entries[t]
            h, cache = dense_forward(layer, entry.weights, entry.biases, h)
            t += 1
        elif isinstance(layer, Relu):
            h, cache = relu_forward(h)
        elif isinstance(layer, Dropout):
            h, cache = dropout_forward(layer, h, train, rng)
        elif isinstance(layer, Flatten):
            cache = h.shape
            h = h.reshape(h.shape[0], -1)
        elif isinstance(layer, Softmax):
            trace.logits = h
            h = softmax(h)
            cache = h
        else:
            raise ShapeError(i, f"unknown layer {layer!r}")
        trace.caches.append(cache)
        trace.shapes.append(h.shape[1:])
    out = h[0] if single else h
    return out, trace


def loss_and_grads(
    spec: NetworkSpec,
    params: ParameterStore,
    X: np.ndarray,
    Y: np.ndarray,
    rng=None,
    mode: str = "train",
    with_probs: bool = False,
):
    """Mean cross-entropy over the batch and its exact parameter gradients.

    Y is one-hot [B, num_classes]. The loss reads log-probabilities straight
    off the logits (log-sum-exp), and backpropagation starts from the fused
    softmax+cross-entropy gradient (probs - targets)/B, so no ln(0) and no
    division by tiny probabilities anywhere.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.ndim != 3 or X.shape[0] == 0:
        raise ValueError("batch must be a non-empty [B, L, C] array")
    if not isinstance(spec.layers[-1], Softmax):
        raise ValueError("loss is defined for classifier networks ending in softmax")
    if Y.shape != (X.shape[0], spec.output_dim):
        raise ValueError(
            f"targets shaped {Y.shape}, expected {(X.shape[0], spec.output_dim)}"
        )

    probs, trace = forward(spec, params, X, mode=mode, rng=rng)
    batch = X.shape[0]
    logp = log_softmax(trace.logits)
    loss = float(-(Y * logp).sum() / batch)

    grads = params.zeros_like()
    dh = (probs - Y.astype(probs.dtype)) / probs.dtype.type(batch)
    t = len(params.entries)
    for i in range(len(spec.layers) - 2, -1, -1):
        layer = spec.layers[i]
        cache = trace.caches[i]
        if isinstance(layer, Conv1d):
            t -= 1
            dw, db, dh = conv1d_backward(layer, params.entries[t].weights, cache, dh)
            grads.entries[t].weights[...] = dw
            grads.entries[t].biases[...] = db
        elif isinstance(layer, Dense):
            t -= 1
            dw, db, dh = dense_backward(params.entries[t].weights, cache, dh)
            grads.entries[t].weights[...] = dw
            grads.entries[t].biases[...] = db
        elif isinstance(layer, Relu):
            dh = relu_backward(cache, dh)
        elif isinstance(layer, Dropout):
            dh = dropout_backward(cache, dh)
        elif isinstance(layer, Flatten):
            dh = dh.reshape(cache)
    if with_probs:
        return loss, grads, probs
    return loss, grads
