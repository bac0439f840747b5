"""emgctl: raw-EMG gesture recognition and prosthetic hand command pipeline.

From-scratch 1D CNN (numpy only: im2col convolutions, manual backprop, Adam),
sliding-window signal handling, FIFO majority-vote smoothing, gesture-to-
finger-command mapping and a 10 Hz streaming orchestrator, with sklearn-style
estimator facades on the learnable core.
"""

from .classifier import (
    EpochStats,
    Metrics,
    TrainingConfig,
    build_gesture_cnn,
    evaluate,
    history_line,
    train,
)
from .commands import (
    COMMAND_TABLE,
    FingerCommand,
    class_to_command,
    decode_command_frame,
    encode_command_frame,
)
from .dataset import DatasetIndex, WindowSet, split_by_subject
from .estimators import GestureCnnClassifier, WindowSlicer
from .gestures import GESTURE_LABELS, NUM_GESTURES, GestureClass, one_hot, predict_class
from .nn import (
    AdamConfig,
    AdamState,
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
    gradient_check,
    init_adam,
    init_params,
    load_params,
    loss_and_grads,
    parameter_count,
    same_pad,
    save_params,
    softmax,
)
from .records import (
    EmgRecord,
    RecordMeta,
    WindowTensor,
    downsample_by_jumping,
    slide_windows,
    window_count,
)
from .recordio import load_record, load_record_file, save_record, save_record_csv, save_record_file
from .stream import PipelineConfig, StreamStats, bench_inference, cnn_classifier, run_stream
from .synthetic import ClassRecipe, SynthSpec, default_recipes, make_synth_spec, synth_dataset
from .voting import (
    ErrorModelParams,
    FifoMemory,
    exact_majority_error,
    push_and_aggregate,
    simulate_stream_error,
    sweep_error_report,
    vote_error_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "EpochStats",
    "Metrics",
    "TrainingConfig",
    "build_gesture_cnn",
    "evaluate",
    "history_line",
    "train",
    "COMMAND_TABLE",
    "FingerCommand",
    "class_to_command",
    "decode_command_frame",
    "encode_command_frame",
    "DatasetIndex",
    "WindowSet",
    "split_by_subject",
    "GestureCnnClassifier",
    "WindowSlicer",
    "GESTURE_LABELS",
    "NUM_GESTURES",
    "GestureClass",
    "one_hot",
    "predict_class",
    "AdamConfig",
    "AdamState",
    "Conv1d",
    "Dense",
    "Dropout",
    "Flatten",
    "NetworkSpec",
    "ParameterStore",
    "Relu",
    "Softmax",
    "adam_step",
    "forward",
    "gradient_check",
    "init_adam",
    "init_params",
    "load_params",
    "loss_and_grads",
    "parameter_count",
    "same_pad",
    "save_params",
    "softmax",
    "EmgRecord",
    "RecordMeta",
    "WindowTensor",
    "downsample_by_jumping",
    "slide_windows",
    "window_count",
    "load_record",
    "load_record_file",
    "save_record",
    "save_record_csv",
    "save_record_file",
    "PipelineConfig",
    "StreamStats",
    "bench_inference",
    "cnn_classifier",
    "run_stream",
    "ClassRecipe",
    "SynthSpec",
    "default_recipes",
    "make_synth_spec",
    "synth_dataset",
    "ErrorModelParams",
    "FifoMemory",
    "exact_majority_error",
    "push_and_aggregate",
    "simulate_stream_error",
    "sweep_error_report",
    "vote_error_lower_bound",
]
