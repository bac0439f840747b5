"""Central-difference verification of the analytic gradients.

Everything runs in float64 with dropout disabled so the comparison tolerance
actually means something. Only practical for networks small enough to brute
force (one loss evaluation pair per parameter).
"""

from __future__ import annotations

import numpy as np

from .network import NetworkSpec, ParameterStore, loss_and_grads

MAX_BRUTE_FORCE_PARAMS = 10_000


def gradient_check(
    spec: NetworkSpec,
    params: ParameterStore,
    X: np.ndarray,
    Y: np.ndarray,
    step: float = 1e-5,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Relative error per parameter is |a - n| / max(|a|, |n|, 1e-6); the floor
    keeps parameters with no influence on the loss from amplifying rounding
    noise.

    Only meaningful where the loss is differentiable: a relu pre-activation
    within ~step of zero straddles the kink and makes the two sides disagree
    by construction (zero biases make exact-zero pre-activations likely).
    Callers should check at inputs with a margin from the kinks.
    """
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step}")
    if params.size() > MAX_BRUTE_FORCE_PARAMS:
        raise ValueError(
            f"network has {params.size()} parameters; brute force capped at "
            f"{MAX_BRUTE_FORCE_PARAMS}"
        )
    p64 = params.astype(np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        X = X[np.newaxis]
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[np.newaxis]

    _, analytic = loss_and_grads(spec, p64, X, Y, mode="infer")

    def loss_at(store: ParameterStore) -> float:
        value, _ = loss_and_grads(spec, store, X, Y, mode="infer")
        return value

    worst = 0.0
    arrays = p64.arrays()
    grads = analytic.arrays()
    for arr, grad in zip(arrays, grads):
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + step
            up = loss_at(p64)
            flat[j] = orig - step
            down = loss_at(p64)
            flat[j] = orig
            numeric = (up - down) / (2.0 * step)
            denom = max(abs(gflat[j]), abs(numeric), 1e-6)
            worst = max(worst, abs(gflat[j] - numeric) / denom)
    return worst
