"""EMGW weight-file format.

Little-endian layout:

    magic   4 bytes  "EMGW"
    u16     version (1)
    u64     FNV-1a 64 fingerprint of the architecture's canonical string
    u32     trainable layer count
    per trainable layer:
        u8      kind (1 = conv1d, 2 = dense)
        u32[]   dims — conv: kernel, in_channels, filters; dense: in, out
        f32[]   weights row-major, then biases

Conv weights are indexed [kernel_pos][in_channel][filter]; dense [in][out].
The fingerprint pins the exact architecture: loading into anything else is a
hard error, not a best-effort reshape.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import (
    ArchitectureMismatchError,
    BadMagicError,
    FormatError,
    HeaderError,
    TruncatedError,
)
from .layers import Conv1d, Dense
from .network import LayerParams, NetworkSpec, ParameterStore, check_params

EMGW_MAGIC = b"EMGW"
EMGW_VERSION = 1
_KIND_CONV = 1
_KIND_DENSE = 2

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def spec_fingerprint(spec: NetworkSpec) -> int:
    return fnv1a64(spec.canonical().encode("utf-8"))


def save_params(spec: NetworkSpec, params: ParameterStore) -> bytes:
    check_params(spec, params)
    out = bytearray()
    out += EMGW_MAGIC
    out += struct.pack("<H", EMGW_VERSION)
    out += struct.pack("<Q", spec_fingerprint(spec))
    trainable = spec.trainable_layers()
    out += struct.pack("<I", len(trainable))
    for entry, (_, layer) in zip(params.entries, trainable):
        if isinstance(layer, Conv1d):
            kernel, in_channels, filters = entry.weights.shape
            out += struct.pack("<BIII", _KIND_CONV, kernel, in_channels, filters)
        else:
            d_in, d_out = entry.weights.shape
            out += struct.pack("<BII", _KIND_DENSE, d_in, d_out)
        out += np.ascontiguousarray(entry.weights, dtype="<f4").tobytes()
        out += np.ascontiguousarray(entry.biases, dtype="<f4").tobytes()
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(
                f"file ends inside {what}: needed {n} bytes at offset {self.pos}"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def load_params(data: bytes, spec: NetworkSpec) -> ParameterStore:
    r = _Reader(data)
    magic = r.take(4, "magic")
    if magic != EMGW_MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {EMGW_MAGIC!r}")
    (version,) = r.unpack("<H", "version")
    if version != EMGW_VERSION:
        raise HeaderError("version", f"unsupported version {version}")
    (fingerprint,) = r.unpack("<Q", "fingerprint")
    if fingerprint != spec_fingerprint(spec):
        raise ArchitectureMismatchError(
            f"weights were saved for a different architecture "
            f"(fingerprint {fingerprint:#018x}, expected {spec_fingerprint(spec):#018x})"
        )
    (count,) = r.unpack("<I", "layer count")
    trainable = spec.trainable_layers()
    if count != len(trainable):
        raise ArchitectureMismatchError(
            f"file holds {count} trainable layers, network has {len(trainable)}"
        )
    entries = []
    for n, (_, layer) in enumerate(trainable):
        (kind,) = r.unpack("<B", f"layer {n} kind")
        if isinstance(layer, Conv1d):
            if kind != _KIND_CONV:
                raise ArchitectureMismatchError(f"layer {n}: expected conv1d, file says kind {kind}")
            kernel, in_channels, filters = r.unpack("<III", f"layer {n} dims")
            wshape: tuple[int, ...] = (kernel, in_channels, filters)
        elif kind == _KIND_DENSE:
            d_in, d_out = r.unpack("<II", f"layer {n} dims")
            wshape = (d_in, d_out)
        else:
            raise ArchitectureMismatchError(f"layer {n}: expected dense, file says kind {kind}")
        wsize = int(np.prod(wshape))
        bsize = wshape[-1]
        weights = np.frombuffer(r.take(wsize * 4, f"layer {n} weights"), dtype="<f4")
        biases = np.frombuffer(r.take(bsize * 4, f"layer {n} biases"), dtype="<f4")
        entries.append(
            LayerParams(weights.reshape(wshape).copy(), biases.copy())
        )
    if r.pos != len(data):
        raise HeaderError("payload", f"{len(data) - r.pos} unexpected trailing bytes")
    params = ParameterStore(entries=entries)
    check_params(spec, params)
    if not params.allfinite():
        raise FormatError("weight file contains non-finite values")
    return params


def save_params_file(spec: NetworkSpec, params: ParameterStore, path) -> None:
    Path(path).write_bytes(save_params(spec, params))


def load_params_file(path, spec: NetworkSpec) -> ParameterStore:
    return load_params(Path(path).read_bytes(), spec)
