from .adam import AdamConfig, AdamState, adam_step, init_adam
from .gradcheck import gradient_check
from .layers import (
    Conv1d,
    Dense,
    Dropout,
    Flatten,
    LayerSpec,
    Relu,
    Softmax,
    log_softmax,
    same_pad,
    softmax,
)
from .network import (
    ForwardTrace,
    LayerParams,
    NetworkSpec,
    ParameterStore,
    ShapeError,
    check_params,
    forward,
    init_params,
    loss_and_grads,
    parameter_count,
)
from .weights_io import (
    EMGW_MAGIC,
    fnv1a64,
    load_params,
    load_params_file,
    save_params,
    save_params_file,
    spec_fingerprint,
)

__all__ = [
    "AdamConfig",
    "AdamState",
    "adam_step",
    "init_adam",
    "gradient_check",
    "Conv1d",
    "Dense",
    "Dropout",
    "Flatten",
    "LayerSpec",
    "Relu",
    "Softmax",
    "log_softmax",
    "same_pad",
    "softmax",
    "ForwardTrace",
    "LayerParams",
    "NetworkSpec",
    "ParameterStore",
    "ShapeError",
    "check_params",
    "forward",
    "init_params",
    "loss_and_grads",
    "parameter_count",
    "EMGW_MAGIC",
    "fnv1a64",
    "load_params",
    "load_params_file",
    "save_params",
    "save_params_file",
    "spec_fingerprint",
]
