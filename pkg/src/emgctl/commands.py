"""Gesture class to five-finger command lookup and the 9-byte wire frame.

Frame layout: sync 0xA5, u16 little-endian sequence number, five finger bytes
(thumb..pinky, each 0 or 1), and an XOR checksum of the previous eight bytes.
One byte per finger leaves room for graded activation later without touching
the framing.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import FrameChecksumError, FrameSyncError, FrameValueError, TruncatedError
from .gestures import NUM_GESTURES, GestureClass

FRAME_SYNC = 0xA5
FRAME_LEN = 9


@dataclass(frozen=True)
class FingerCommand:
    """Thumb..pinky activations; 0 = fully relaxed, 1 = fully contracted."""

    thumb: int
    index: int
    middle: int
    ring: int
    pinky: int

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if value not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1, got {value!r}")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.thumb, self.index, self.middle, self.ring, self.pinky)

    def as_dict(self) -> dict[str, int]:
        return {
            "thumb": self.thumb,
            "index": self.index,
            "middle": self.middle,
            "ring": self.ring,
            "pinky": self.pinky,
        }


# Row order matches GestureClass indices.
COMMAND_TABLE: tuple[FingerCommand, ...] = (
    FingerCommand(1, 0, 0, 0, 0),  # Thumb
    FingerCommand(0, 1, 0, 0, 0),  # Index
    FingerCommand(0, 0, 1, 0, 0),  # Middle
    FingerCommand(0, 0, 0, 1, 0),  # Ring
    FingerCommand(0, 0, 0, 0, 1),  # Little
    FingerCommand(1, 1, 0, 0, 0),  # Thumb-Index
    FingerCommand(1, 0, 1, 0, 0),  # Thumb-Middle
    FingerCommand(1, 0, 0, 1, 0),  # Thumb-Ring
    FingerCommand(1, 0, 0, 0, 1),  # Thumb-Little
    FingerCommand(0, 0, 0, 0, 0),  # Hand Close
    FingerCommand(0, 1, 1, 0, 0),  # Index-Middle
    FingerCommand(0, 0, 1, 1, 0),  # Middle-Ring
    FingerCommand(0, 0, 0, 1, 1),  # Ring-Little
    FingerCommand(0, 1, 1, 1, 0),  # Index-Middle-Ring
    FingerCommand(0, 0, 1, 1, 1),  # Middle-Ring-Little
)

assert len(COMMAND_TABLE) == NUM_GESTURES


def class_to_command(gesture: GestureClass | int) -> FingerCommand:
    return COMMAND_TABLE[GestureClass(gesture)]


def encode_command_frame(cmd: FingerCommand, seq: int) -> bytes:
    if not 0 <= seq <= 0xFFFF:
        raise ValueError(f"sequence number {seq} does not fit in u16")
    body = bytes([FRAME_SYNC]) + struct.pack("<H", seq) + bytes(cmd.as_tuple())
    checksum = 0
    for b in body:
        checksum ^= b
    return body + bytes([checksum])


def decode_command_frame(data: bytes) -> tuple[FingerCommand, int]:
    if len(data) != FRAME_LEN:
        raise TruncatedError(f"frame is {len(data)} bytes, expected {FRAME_LEN}")
    if data[0] != FRAME_SYNC:
        raise FrameSyncError(f"sync byte {data[0]:#04x}, expected {FRAME_SYNC:#04x}")
    checksum = 0
    for b in data[:-1]:
        checksum ^= b
    if checksum != data[-1]:
        raise FrameChecksumError(
            f"checksum {data[-1]:#04x} does not match computed {checksum:#04x}"
        )
    fingers = data[3:8]
    if any(v not in (0, 1) for v in fingers):
        raise FrameValueError(f"finger bytes {fingers.hex()} outside {{0, 1}}")
    (seq,) = struct.unpack("<H", data[1:3])
    return FingerCommand(*fingers), seq
