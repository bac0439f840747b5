"""EMG1 binary record format and the emgcsv text alternative.

EMG1, little-endian throughout:

    magic   4 bytes  "EMG1"
    u16     version (1)
    u16     channels
    u32     sample_rate in Hz
    u16     subject_id
    u16     gesture_id
    u16     repetition
    u64     num_samples
    f32[]   num_samples * channels values, channel-major within each sample

emgcsv: a `# emgcsv v1 channels=<C> rate=<Hz>` header line, then one row of C
decimal mV values per sample. load_record sniffs the two by their first bytes.
"""

from __future__ import annotations

import re
import struct
from pathlib import Path

import numpy as np

from .errors import BadMagicError, FormatError, HeaderError, TruncatedError
from .records import EmgRecord, RecordMeta

EMG1_MAGIC = b"EMG1"
EMG1_VERSION = 1
_HEADER = struct.Struct("<4sHHIHHHQ")
CSV_HEADER_RE = re.compile(r"^# emgcsv v1 channels=(\d+) rate=(\d+)\s*$")


def save_record(record: EmgRecord) -> bytes:
    for name, value in (
        ("subject_id", record.meta.subject_id),
        ("gesture_id", record.meta.gesture),
        ("repetition", record.meta.repetition),
    ):
        if not 0 <= value <= 0xFFFF:
            raise ValueError(f"{name} {value} does not fit in u16")
    header = _HEADER.pack(
        EMG1_MAGIC,
        EMG1_VERSION,
        record.channels,
        record.sample_rate,
        record.meta.subject_id,
        record.meta.gesture,
        record.meta.repetition,
        record.num_samples,
    )
    payload = np.ascontiguousarray(record.samples, dtype="<f4").tobytes()
    return header + payload


def load_record(data: bytes) -> EmgRecord:
    if data[:9].lstrip().startswith(b"#"):
        return _load_csv(data)
    return _load_binary(data)


def _load_binary(data: bytes) -> EmgRecord:
    if len(data) < 4:
        raise TruncatedError(f"only {len(data)} bytes, header needs {_HEADER.size}")
    if data[:4] != EMG1_MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}, expected {EMG1_MAGIC!r}")
    if len(data) < _HEADER.size:
        raise TruncatedError(f"only {len(data)} bytes, header needs {_HEADER.size}")
    (_, version, channels, rate, subject, gesture, repetition, num_samples) = _HEADER.unpack_from(data)
    if version != EMG1_VERSION:
        raise HeaderError("version", f"unsupported version {version}")
    if channels == 0:
        raise HeaderError("channels", "zero channels")
    if rate == 0:
        raise HeaderError("sample_rate", "zero sample rate")
    expected = num_samples * channels * 4
    payload = data[_HEADER.size :]
    if len(payload) < expected:
        raise TruncatedError(
            f"payload holds {len(payload)} bytes, header declares {expected}"
        )
    if len(payload) > expected:
        raise FormatError(f"{len(payload) - expected} unexpected trailing bytes")
    samples = np.frombuffer(payload, dtype="<f4").reshape(num_samples, channels)
    return EmgRecord(
        samples=samples.copy(),
        sample_rate=rate,
        meta=RecordMeta(subject_id=subject, gesture=gesture, repetition=repetition),
    )


def save_record_csv(record: EmgRecord) -> str:
    lines = [f"# emgcsv v1 channels={record.channels} rate={record.sample_rate}"]
    for row in record.samples:
        lines.append(",".join(np.format_float_positional(v, unique=True) for v in row))
    return "\n".join(lines) + "\n"


def _load_csv(data: bytes) -> EmgRecord:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"not valid utf-8: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise TruncatedError("empty file")
    m = CSV_HEADER_RE.match(lines[0])
    if m is None:
        raise BadMagicError(f"bad emgcsv header line {lines[0]!r}")
    channels, rate = int(m.group(1)), int(m.group(2))
    if channels == 0:
        raise HeaderError("channels", "zero channels")
    if rate == 0:
        raise HeaderError("sample_rate", "zero sample rate")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != channels:
            raise FormatError(f"line {lineno}: expected {channels} values, got {len(parts)}")
        try:
            rows.append([np.float32(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    samples = np.array(rows, dtype=np.float32).reshape(len(rows), channels)
    return EmgRecord(samples=samples, sample_rate=rate)


def load_stream_record(data: bytes) -> EmgRecord:
    """Parse an EMG1 header followed by an unbounded payload.

    Stream sources cannot know their length up front, so the header's
    num_samples is ignored; every complete sample present is kept and any
    trailing partial sample is dropped.
    """
    if len(data) < _HEADER.size:
        raise TruncatedError(f"only {len(data)} bytes, header needs {_HEADER.size}")
    if data[:4] != EMG1_MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}, expected {EMG1_MAGIC!r}")
    (_, version, channels, rate, subject, gesture, repetition, _declared) = _HEADER.unpack_from(data)
    if version != EMG1_VERSION:
        raise HeaderError("version", f"unsupported version {version}")
    if channels == 0:
        raise HeaderError("channels", "zero channels")
    if rate == 0:
        raise HeaderError("sample_rate", "zero sample rate")
    payload = data[_HEADER.size :]
    complete = len(payload) // (channels * 4)
    samples = np.frombuffer(payload[: complete * channels * 4], dtype="<f4")
    return EmgRecord(
        samples=samples.reshape(complete, channels).copy(),
        sample_rate=rate,
        meta=RecordMeta(subject_id=subject, gesture=gesture, repetition=repetition),
    )


def save_record_file(record: EmgRecord, path) -> None:
    Path(path).write_bytes(save_record(record))


def load_record_file(path) -> EmgRecord:
    return load_record(Path(path).read_bytes())
