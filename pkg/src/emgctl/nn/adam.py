"""Adam with bias correction, operating on a ParameterStore."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import ParameterStore


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.0001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-08


@dataclass
class AdamState:
    """First/second moment accumulators (parameter-shaped) and the step counter."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int
    config: AdamConfig


def init_adam(params: ParameterStore, config: AdamConfig | None = None) -> AdamState:
    config = config or AdamConfig()
    arrays = params.arrays()
    return AdamState(
        m=[np.zeros_like(a) for a in arrays],
        v=[np.zeros_like(a) for a in arrays],
        t=0,
        config=config,
    )


def adam_step(
    params: ParameterStore, grads: ParameterStore, state: AdamState
) -> tuple[ParameterStore, AdamState]:
    """One update: m, v decay toward g and g^2, bias-corrected, then
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps). Pure: inputs untouched."""
    theta = params.arrays()
    g = grads.arrays()
    if len(theta) != len(g) or any(a.shape != b.shape for a, b in zip(theta, g)):
        raise ValueError("gradient shapes do not match parameter shapes")
    for arr in g:
        if not np.isfinite(arr).all():
            raise ValueError("non-finite gradient")

    cfg = state.config
    t = state.t + 1
    bc1 = 1.0 - cfg.beta1**t
    bc2 = 1.0 - cfg.beta2**t
    new_theta, new_m, new_v = [], [], []
    for p, gr, m, v in zip(theta, g, state.m, state.v):
        dt = p.dtype.type
        m = dt(cfg.beta1) * m + dt(1.0 - cfg.beta1) * gr
        v = dt(cfg.beta2) * v + dt(1.0 - cfg.beta2) * gr * gr
        m_hat = m / dt(bc1)
        v_hat = v / dt(bc2)
        new_theta.append(p - dt(cfg.learning_rate) * m_hat / (np.sqrt(v_hat) + dt(cfg.epsilon)))
        new_m.append(m)
        new_v.append(v)
    return (
        ParameterStore.from_arrays(new_theta),
        AdamState(m=new_m, v=new_v, t=t, config=cfg),
    )
