"""Raw EMG records, jump decimation and sliding-window extraction.

Signals stay untouched end to end: no filtering, rectification or scaling
happens anywhere in this module. Windows are verbatim slices of the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import as_sample_matrix, check_positive_int


@dataclass(frozen=True)
class RecordMeta:
    subject_id: int = 0
    gesture: int = 0
    repetition: int = 0


@dataclass(frozen=True)
class EmgRecord:
    """Multi-channel raw EMG time series in mV.

    samples is [num_samples, channels] float32; values are stored exactly as
    given (after the float32 cast) with no preprocessing.
    """

    samples: np.ndarray
    sample_rate: int
    meta: RecordMeta = field(default_factory=RecordMeta)

    def __post_init__(self):
        object.__setattr__(self, "samples", as_sample_matrix(self.samples))
        check_positive_int("sample_rate", self.sample_rate)

    @property
    def num_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def channels(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.num_samples / self.sample_rate


@dataclass(frozen=True)
class WindowTensor:
    """One contiguous [window_len, channels] slice of a record, plus where it came from."""

    values: np.ndarray
    origin: int


def downsample_by_jumping(record: EmgRecord, factor: int) -> EmgRecord:
    """Decimate by keeping samples 0, factor, 2*factor, ... — no filtering.

    The factor must divide the sample rate evenly; mixed-rate output is not a
    thing this library produces.
    """
    factor = check_positive_int("factor", factor)
    if record.sample_rate % factor != 0:
        raise ValueError(
            f"factor {factor} does not divide sample_rate {record.sample_rate}"
        )
    if factor == 1:
        return record
    return EmgRecord(
        samples=record.samples[::factor].copy(),
        sample_rate=record.sample_rate // factor,
        meta=record.meta,
    )


def window_count(num_samples: int, window_len: int, stride: int) -> int:
    """Number of windows a slider emits: floor((N - W) / S) + 1."""
    if num_samples < window_len:
        raise ValueError(
            f"record of {num_samples} samples is shorter than window_len {window_len}"
        )
    return (num_samples - window_len) // stride + 1


def window_starts(num_samples: int, window_len: int, stride: int) -> np.ndarray:
    count = window_count(num_samples, window_len, stride)
    return np.arange(count, dtype=np.int64) * stride


def slide_windows(record: EmgRecord, window_len: int, stride: int) -> list[WindowTensor]:
    """Extract every window of ``window_len`` samples, advancing by ``stride``.

    Window k starts at sample k*stride and is a verbatim copy of the slice.
    """
    window_len = check_positive_int("window_len", window_len)
    stride = check_positive_int("stride", stride)
    starts = window_starts(record.num_samples, window_len, stride)
    return [
        WindowTensor(values=record.samples[s : s + window_len].copy(), origin=int(s))
        for s in starts
    ]


def window_batch(samples: np.ndarray, starts: np.ndarray, window_len: int) -> np.ndarray:
    """Gather windows at the given start samples into one [B, W, C] array."""
    view = np.lib.stride_tricks.sliding_window_view(samples, window_len, axis=0)
    return np.ascontiguousarray(view[starts].transpose(0, 2, 1))
