"""Streaming orchestration: signal -> window -> classifier -> FIFO -> command.

File input runs as fast as possible with virtual timestamps and processes
every window, so results are reproducible byte for byte. Paced (live) input
instead skips stale windows after an overrun: a prosthesis should act on the
muscle's current state, not a backlog. One logical consumer owns the FIFO
and the command sink.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .commands import class_to_command, encode_command_frame
from .gestures import GestureClass
from .nn import NetworkSpec, ParameterStore, forward
from .records import EmgRecord, window_count
from .validation import check_odd, check_positive_int
from .voting import FifoMemory


@dataclass(frozen=True)
class PipelineConfig:
    window_len: int = 200
    stride: int | None = None  # None: derived as sample_rate // rate
    fifo_capacity: int = 5
    rate: int = 10
    seed: int = 0

    def __post_init__(self):
        check_positive_int("window_len", self.window_len)
        check_odd("fifo_capacity", self.fifo_capacity)
        check_positive_int("rate", self.rate)
        if self.stride is not None:
            check_positive_int("stride", self.stride)

    def resolve_stride(self, sample_rate: int) -> int:
        if self.stride is not None:
            return self.stride
        if sample_rate % self.rate != 0:
            raise ValueError(
                f"rate {self.rate} Hz does not divide sample_rate {sample_rate}"
            )
        return sample_rate // self.rate

    @property
    def frame_period(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class StreamStats:
    frames: int
    p50_us: int
    p95_us: int
    max_us: int
    misses: int
    transitions: int = 0

    def __post_init__(self):
        if not (self.p50_us <= self.p95_us <= self.max_us):
            raise ValueError("latency percentiles out of order")
        if self.misses > self.frames:
            raise ValueError("more deadline misses than frames")

    def line(self) -> str:
        return (
            f"stats,frames,{self.frames},p50us,{self.p50_us},"
            f"p95us,{self.p95_us},maxus,{self.max_us},misses,{self.misses}"
        )


def _latency_stats(latencies_us: list[int], budget_s: float, transitions: int = 0) -> StreamStats:
    lat = np.asarray(latencies_us, dtype=np.int64)
    budget_us = budget_s * 1e6
    return StreamStats(
        frames=int(lat.size),
        p50_us=int(np.percentile(lat, 50, method="nearest")),
        p95_us=int(np.percentile(lat, 95, method="nearest")),
        max_us=int(lat.max()),
        misses=int((lat > budget_us).sum()),
        transitions=transitions,
    )


def cnn_classifier(spec: NetworkSpec, params: ParameterStore) -> Callable[[np.ndarray], int]:
    """Wrap a trained network as a window -> class-index callable."""

    def classify(window: np.ndarray) -> int:
        probs, _ = forward(spec, params, window, mode="infer")
        return int(np.argmax(probs))

    return classify


def stream_windows(record: EmgRecord, window_len: int, stride: int) -> Iterable[np.ndarray]:
    for start in range(0, record.num_samples - window_len + 1, stride):
        yield record.samples[start : start + window_len]


def run_stream(
    config: PipelineConfig,
    record: EmgRecord,
    classify: Callable[[np.ndarray], int],
    paced: bool = False,
) -> tuple[list[bytes], StreamStats]:
    """Push every window of the record through the full command pipeline.

    Returns the encoded command frames (one per processed window) and the
    latency/transition statistics. With ``paced`` set, windows that became
    stale while a slow inference ran are skipped, mimicking live operation.
    """
    stride = config.resolve_stride(record.sample_rate)
    if record.num_samples < config.window_len:
        raise ValueError(
            f"source holds {record.num_samples} samples, one window needs {config.window_len}"
        )
    fifo = FifoMemory(config.fifo_capacity)
    frames: list[bytes] = []
    latencies: list[int] = []
    transitions = 0
    last_cmd = None
    skip = 0
    for window in stream_windows(record, config.window_len, stride):
        if skip > 0:
            skip -= 1
            continue
        t0 = time.perf_counter()
        predicted = classify(window)
        latency = time.perf_counter() - t0
        decided = fifo.push(predicted)
        cmd = class_to_command(GestureClass(decided))
        frames.append(encode_command_frame(cmd, len(frames) % 0x10000))
        latencies.append(int(latency * 1e6))
        if last_cmd is not None and cmd != last_cmd:
            transitions += 1
        last_cmd = cmd
        if paced and latency > config.frame_period:
            skip = int(latency / config.frame_period)
    stats = _latency_stats(latencies, config.frame_period, transitions)
    return frames, stats


def expected_command_count(num_samples: int, window_len: int, stride: int) -> int:
    return window_count(num_samples, window_len, stride)


WARMUP_ITERATIONS = 10


def bench_inference(
    spec: NetworkSpec,
    params: ParameterStore,
    iterations: int,
    threads: int | None = None,
    budget_s: float = 0.1,
) -> StreamStats:
    """Latency distribution of repeated single-window forward passes.

    Runs 10 unmeasured warm-up passes first. ``threads`` caps the BLAS pool
    for the duration of the benchmark (1 = single worker).
    """
    check_positive_int("iterations", iterations)
    if threads is not None:
        check_positive_int("threads", threads)
    rng = np.random.default_rng(0)
    window = rng.standard_normal(spec.input_shape).astype(np.float32)

    def measure() -> StreamStats:
        for _ in range(WARMUP_ITERATIONS):
            forward(spec, params, window, mode="infer")
        latencies = []
        for _ in range(iterations):
            t0 = time.perf_counter()
            forward(spec, params, window, mode="infer")
            latencies.append(int((time.perf_counter() - t0) * 1e6))
        return _latency_stats(latencies, budget_s)

    if threads is None:
        return measure()
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=threads):
        return measure()
