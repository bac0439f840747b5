"""Dataset indexing, lazy labeled window sets and the subject/repetition split."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .records import EmgRecord, window_batch, window_count
from .validation import check_positive_int


class DatasetIndex:
    """Immutable collection of records keyed by (subject, gesture, repetition).

    Keys must be unique and all records must share channel count and sample
    rate; mixed-rate collections are rejected outright instead of resampled.
    """

    def __init__(self, records: Iterable[EmgRecord]):
        records = tuple(records)
        if not records:
            raise ValueError("dataset must contain at least one record")
        by_key = {}
        for rec in records:
            key = (rec.meta.subject_id, rec.meta.gesture, rec.meta.repetition)
            if key in by_key:
                raise ValueError(f"duplicate (subject, gesture, repetition) key {key}")
            by_key[key] = rec
        channels = {rec.channels for rec in records}
        rates = {rec.sample_rate for rec in records}
        if len(channels) != 1:
            raise ValueError(f"records disagree on channel count: {sorted(channels)}")
        if len(rates) != 1:
            raise ValueError(f"records disagree on sample rate: {sorted(rates)}")
        self._records = records
        self._by_key = by_key

    @property
    def records(self) -> tuple[EmgRecord, ...]:
        return self._records

    @property
    def channels(self) -> int:
        return self._records[0].channels

    @property
    def sample_rate(self) -> int:
        return self._records[0].sample_rate

    @property
    def subjects(self) -> tuple[int, ...]:
        return tuple(sorted({r.meta.subject_id for r in self._records}))

    @property
    def gestures(self) -> tuple[int, ...]:
        return tuple(sorted({r.meta.gesture for r in self._records}))

    @property
    def repetitions(self) -> tuple[int, ...]:
        return tuple(sorted({r.meta.repetition for r in self._records}))

    def get(self, subject: int, gesture: int, repetition: int) -> EmgRecord:
        return self._by_key[(subject, gesture, repetition)]

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[EmgRecord]:
        return iter(self._records)


class WindowSet:
    """Labeled sliding windows over a set of records, materialized on demand.

    Holds only the source records plus window bookkeeping; ``gather`` copies
    the requested windows out as one [B, window_len, channels] float32 batch.
    """

    def __init__(self, records: Sequence[EmgRecord], window_len: int, stride: int):
        check_positive_int("window_len", window_len)
        check_positive_int("stride", stride)
        if not records:
            raise ValueError("window set needs at least one record")
        self.records = tuple(records)
        self.window_len = window_len
        self.stride = stride
        self.counts = np.array(
            [window_count(r.num_samples, window_len, stride) for r in self.records],
            dtype=np.int64,
        )
        self.offsets = np.concatenate([[0], np.cumsum(self.counts)])
        self.record_labels = np.array([r.meta.gesture for r in self.records], dtype=np.int64)
        self.channels = self.records[0].channels

    def __len__(self) -> int:
        return int(self.offsets[-1])

    @property
    def labels(self) -> np.ndarray:
        return np.repeat(self.record_labels, self.counts)

    def gather(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= len(self)):
            raise IndexError("window index out of range")
        rec_idx = np.searchsorted(self.offsets, indices, side="right") - 1
        starts = (indices - self.offsets[rec_idx]) * self.stride
        out = np.empty((indices.shape[0], self.window_len, self.channels), dtype=np.float32)
        for r in np.unique(rec_idx):
            mask = rec_idx == r
            out[mask] = window_batch(self.records[r].samples, starts[mask], self.window_len)
        return out

    def batches(self, batch_size: int, order: np.ndarray | None = None):
        """Yield (windows, labels) batches; the final short batch is kept."""
        check_positive_int("batch_size", batch_size)
        if order is None:
            order = np.arange(len(self), dtype=np.int64)
        labels = self.labels
        for i in range(0, len(order), batch_size):
            idx = order[i : i + batch_size]
            yield self.gather(idx), labels[idx]


def split_by_subject(
    index: DatasetIndex,
    test_subjects: set[int] | None = None,
    val_repetition: int = 2,
    window_len: int = 200,
    stride: int = 20,
) -> tuple[WindowSet, WindowSet, WindowSet]:
    """Partition a dataset's windows into (train, validation, test).

    Test gets every window from ``test_subjects`` (default: the two highest
    subject ids); validation gets ``val_repetition`` from the remaining
    subjects; train gets the rest. The three sets are disjoint and exhaustive
    at record granularity, hence also at window granularity.
    """
    subjects = set(index.subjects)
    if test_subjects is None:
        test_subjects = set(sorted(subjects)[-2:])
    test_subjects = set(test_subjects)
    if not test_subjects <= subjects:
        raise ValueError(f"unknown test subjects {sorted(test_subjects - subjects)}")
    if test_subjects >= subjects:
        raise ValueError("test_subjects must leave at least one subject for training")
    if val_repetition not in index.repetitions:
        raise ValueError(
            f"val_repetition {val_repetition} not among repetitions {index.repetitions}"
        )

    train_recs, val_recs, test_recs = [], [], []
    for rec in index:
        if rec.meta.subject_id in test_subjects:
            test_recs.append(rec)
        elif rec.meta.repetition == val_repetition:
            val_recs.append(rec)
        else:
            train_recs.append(rec)
    if not train_recs:
        raise ValueError("split leaves no training records")
    return (
        WindowSet(train_recs, window_len, stride),
        WindowSet(val_recs, window_len, stride),
        WindowSet(test_recs, window_len, stride),
    )
