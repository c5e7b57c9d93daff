import struct
import zlib

import numpy as np
import numpy.testing as npt
import pytest

from sentweet.errors import CorruptPayload, FormatVersionMismatch
from sentweet.labels import CANONICAL_LABELS
from sentweet.net import init_network, load_model, params_equal, save_model
from sentweet.net.serialize import FORMAT_VERSION, MAGIC, load_header


def _params(arch="lstm", seed=1):
    return init_network(arch, input_dim=6, hidden1=4, hidden2=3, seed=seed)


def _reseal(data: bytes) -> bytes:
    """Recompute the trailing checksum after tampering with the body."""
    body = data[:-4]
    return body + struct.pack("<I", zlib.crc32(body))


def test_fresh_network_round_trips_bit_exactly():
    for arch in ("lstm", "bdlstm"):
        params = _params(arch)
        loaded = load_model(save_model(params))
        assert params_equal(loaded, params), arch
        assert loaded.arch == arch
        assert loaded.dropout_rate == params.dropout_rate


def test_trained_weights_round_trip_at_storage_precision():
    params = _params()
    rng = np.random.default_rng(0)
    for _, arr in params.flat_arrays():
        arr += rng.normal(size=arr.shape) * 1e-3  # float64 noise a file cannot keep
    loaded = load_model(save_model(params))
    for (name, orig), (_, back) in zip(params.flat_arrays(), loaded.flat_arrays()):
        want = orig.astype(np.float32).astype(np.float64)
        npt.assert_array_equal(back, want, err_msg=name)


def test_save_load_save_is_byte_identical():
    params = _params("bdlstm")
    rng = np.random.default_rng(1)
    for _, arr in params.flat_arrays():
        arr += rng.normal(size=arr.shape) * 0.01
    first = save_model(params)
    second = save_model(load_model(first))
    assert first == second


def test_truncated_data_rejected():
    data = save_model(_params())
    for cut in (0, 4, len(data) // 2, len(data) - 1):
        with pytest.raises(CorruptPayload):
            load_model(data[:cut])


def test_flipped_byte_rejected():
    data = bytearray(save_model(_params()))
    data[len(data) // 2] ^= 0x40
    with pytest.raises(CorruptPayload):
        load_model(bytes(data))


def test_future_version_rejected():
    data = bytearray(save_model(_params()))
    assert data[len(MAGIC)] == FORMAT_VERSION
    data[len(MAGIC)] = FORMAT_VERSION + 1
    resealed = _reseal(bytes(data))
    with pytest.raises(FormatVersionMismatch):
        load_model(resealed)
    with pytest.raises(FormatVersionMismatch):
        load_header(resealed)


def test_bad_magic_rejected_even_with_valid_checksum():
    data = bytearray(save_model(_params()))
    data[0] = ord(b"X")
    with pytest.raises(CorruptPayload):
        load_model(_reseal(bytes(data)))


def test_header_carries_extra_metadata():
    params = _params()
    data = save_model(params, extra={"max_len": 40, "note": "unit"})
    header = load_header(data)
    assert header["max_len"] == 40
    assert header["note"] == "unit"
    assert header["arch"] == "lstm"
    assert header["labels"] == list(CANONICAL_LABELS)
    # the model itself still loads
    assert params_equal(load_model(data), params)


def test_extra_cannot_override_reserved_keys():
    data = save_model(_params(), extra={"arch": "bdlstm", "n_labels": 2})
    header = load_header(data)
    assert header["arch"] == "lstm"
    assert header["n_labels"] == 11
    assert load_model(data).arch == "lstm"


def test_custom_labels_length_must_match():
    with pytest.raises(CorruptPayload):
        load_model(save_model(_params(), labels=["a", "b", "c"]))


def test_non_finite_stored_values_rejected():
    params = _params()
    params.w_out[0, 0] = np.nan
    with pytest.raises(CorruptPayload) as err:
        load_model(save_model(params))
    assert "non-finite" in str(err.value)


def test_unknown_arch_tag_rejected():
    params = _params()
    data = save_model(params)
    swapped = data.replace(b'"arch": "lstm"', b'"arch": "gru0"')
    assert len(swapped) == len(data)
    with pytest.raises(CorruptPayload):
        load_model(_reseal(swapped))
