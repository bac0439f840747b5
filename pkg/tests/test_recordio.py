import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from emgctl import EmgRecord, RecordMeta, load_record, save_record, save_record_csv
from emgctl.errors import BadMagicError, FormatError, HeaderError, TruncatedError
from emgctl.recordio import EMG1_MAGIC, load_stream_record

finite_f32 = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False, width=32
)


def test_minimal_round_trip():
    rec = EmgRecord(
        samples=np.arange(16, dtype=np.float32).reshape(2, 8),
        sample_rate=2000,
        meta=RecordMeta(subject_id=3, gesture=9, repetition=1),
    )
    back = load_record(save_record(rec))
    np.testing.assert_array_equal(back.samples, rec.samples)
    assert back.sample_rate == 2000
    assert back.meta == rec.meta


@settings(max_examples=50)
@given(
    samples=hnp.arrays(
        np.float32,
        st.tuples(st.integers(0, 40), st.integers(1, 9)),
        elements=finite_f32,
    ),
    rate=st.integers(1, 100_000),
    subject=st.integers(0, 65535),
    gesture=st.integers(0, 65535),
    rep=st.integers(0, 65535),
)
def test_round_trip_bit_exact(samples, rate, subject, gesture, rep):
    rec = EmgRecord(
        samples=samples,
        sample_rate=rate,
        meta=RecordMeta(subject_id=subject, gesture=gesture, repetition=rep),
    )
    back = load_record(save_record(rec))
    assert back.samples.tobytes() == rec.samples.tobytes()
    assert (back.sample_rate, back.meta) == (rec.sample_rate, rec.meta)


def _valid_bytes():
    rec = EmgRecord(samples=np.ones((4, 2), dtype=np.float32), sample_rate=100)
    return save_record(rec)


def test_bad_magic():
    data = b"XMG1" + _valid_bytes()[4:]
    with pytest.raises(BadMagicError):
        load_record(data)


def test_truncated_payload():
    data = _valid_bytes()
    with pytest.raises(TruncatedError):
        load_record(data[:-5])
    with pytest.raises(TruncatedError):
        load_record(data[:10])  # ends inside the header


def test_trailing_bytes_rejected():
    with pytest.raises(FormatError):
        load_record(_valid_bytes() + b"\x00")


def _header(channels=2, rate=100, n=0):
    return struct.pack("<4sHHIHHHQ", EMG1_MAGIC, 1, channels, rate, 0, 0, 0, n)


def test_zero_channels_and_zero_rate_are_distinct_errors():
    with pytest.raises(HeaderError) as exc_ch:
        load_record(_header(channels=0))
    with pytest.raises(HeaderError) as exc_rate:
        load_record(_header(rate=0))
    assert exc_ch.value.field == "channels"
    assert exc_rate.value.field == "sample_rate"


def test_unsupported_version():
    data = bytearray(_valid_bytes())
    data[4] = 2
    with pytest.raises(HeaderError):
        load_record(bytes(data))


def test_csv_round_trip():
    rng = np.random.default_rng(5)
    rec = EmgRecord(
        samples=rng.standard_normal((7, 3)).astype(np.float32), sample_rate=250
    )
    back = load_record(save_record_csv(rec).encode())
    assert back.samples.tobytes() == rec.samples.tobytes()
    assert back.sample_rate == 250


def test_csv_header_and_row_errors():
    with pytest.raises(BadMagicError):
        load_record(b"# emgcsv v2 channels=2 rate=100\n0,0\n")
    with pytest.raises(FormatError):
        load_record(b"# emgcsv v1 channels=3 rate=100\n0,0\n")  # row width mismatch
    with pytest.raises(HeaderError):
        load_record(b"# emgcsv v1 channels=2 rate=0\n0,0\n")


def test_stream_record_ignores_declared_count():
    rec = EmgRecord(samples=np.ones((6, 2), dtype=np.float32), sample_rate=100)
    data = bytearray(save_record(rec))
    struct.pack_into("<Q", data, 18, 0)  # lie about num_samples
    partial = bytes(data) + b"\x01\x02"  # plus a torn trailing sample
    back = load_stream_record(partial)
    assert back.num_samples == 6
    np.testing.assert_array_equal(back.samples, rec.samples)
