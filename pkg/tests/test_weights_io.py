import numpy as np
import pytest

from emgctl.errors import ArchitectureMismatchError, BadMagicError, HeaderError, TruncatedError
from emgctl.nn import (
    Conv1d,
    Dense,
    Flatten,
    NetworkSpec,
    Relu,
    Softmax,
    fnv1a64,
    init_params,
    load_params,
    save_params,
    spec_fingerprint,
)


def small_spec(units=5):
    return NetworkSpec(
        input_shape=(10, 2),
        layers=(Conv1d(3, 4, 2), Relu(), Flatten(), Dense(units), Softmax()),
    )


def test_fnv1a64_known_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_round_trip_bit_exact():
    spec = small_spec()
    params = init_params(spec, seed=42)
    back = load_params(save_params(spec, params), spec)
    assert back.equals_bitwise(params)


def test_round_trip_randomized():
    rng = np.random.default_rng(0)
    spec = small_spec()
    for seed in rng.integers(0, 2**31, size=5):
        params = init_params(spec, seed=int(seed))
        for e in params.entries:
            e.biases[...] = rng.standard_normal(e.biases.shape).astype(np.float32)
        assert load_params(save_params(spec, params), spec).equals_bitwise(params)


def test_wrong_architecture_rejected():
    spec = small_spec(units=5)
    params = init_params(spec, seed=0)
    blob = save_params(spec, params)
    with pytest.raises(ArchitectureMismatchError):
        load_params(blob, small_spec(units=6))


def test_fingerprint_tracks_every_layer_field():
    base = spec_fingerprint(small_spec(units=5))
    assert base != spec_fingerprint(small_spec(units=6))
    wider_input = NetworkSpec(
        input_shape=(11, 2),
        layers=small_spec().layers,
    )
    assert base != spec_fingerprint(wider_input)


def test_truncated_rejected():
    spec = small_spec()
    blob = save_params(spec, init_params(spec, seed=1))
    with pytest.raises(TruncatedError):
        load_params(blob[: len(blob) // 2], spec)
    with pytest.raises(TruncatedError):
        load_params(blob[:5], spec)


def test_bad_magic_and_trailing_bytes():
    spec = small_spec()
    blob = save_params(spec, init_params(spec, seed=2))
    with pytest.raises(BadMagicError):
        load_params(b"XXXX" + blob[4:], spec)
    with pytest.raises(HeaderError):
        load_params(blob + b"\x00", spec)
