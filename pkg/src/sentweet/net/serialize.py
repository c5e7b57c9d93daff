"""Model file format.

Layout: magic b"SPNET", one version byte, a length-prefixed UTF-8 JSON
header (architecture, dimensions, dropout rate, labels, array manifest),
then each parameter array as a length-prefixed little-endian float32
block in flat_arrays order, then a CRC32 of everything before it. All
length prefixes are 4-byte little-endian unsigned.

Weights are float64 in memory and float32 on disk; freshly initialized
networks are quantized through float32 at creation, so save/load of an
untrained model reproduces it bit-exactly.
"""

import json
import struct
import zlib

import numpy as np

from sentweet.errors import CorruptPayload, FormatVersionMismatch
from sentweet.labels import CANONICAL_LABELS
from sentweet.net.params import LayerParams, NetworkParameters

MAGIC = b"SPNET"
FORMAT_VERSION = 1


def save_model(params: NetworkParameters, labels=CANONICAL_LABELS, extra=None) -> bytes:
    """extra: optional JSON-safe metadata (e.g. encoding max_len) merged
    into the header; reserved keys cannot be overridden."""
    arrays = params.flat_arrays()
    header = dict(extra or {})
    header.update({
        "arch": params.arch,
        "input_dim": params.input_dim,
        "hidden1": params.hidden1,
        "hidden2": params.hidden2,
        "n_labels": params.n_labels,
        "dropout_rate": params.dropout_rate,
        "rng_seed": params.rng_seed,
        "labels": list(labels),
        "arrays": [{"name": name, "shape": list(arr.shape)} for name, arr in arrays],
    })
    head = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    parts = [MAGIC, bytes([FORMAT_VERSION]), struct.pack("<I", len(head)), head]
    for _, arr in arrays:
        raw = np.ascontiguousarray(arr, dtype="<f4").tobytes()
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptPayload("unexpected end of model data")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def take_u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def load_model(data: bytes) -> NetworkParameters:
    """Inverse of save_model; verifies magic, version, and checksum."""
    if len(data) < len(MAGIC) + 1 + 4 + 4:
        raise CorruptPayload("model data is too short")
    body, crc_bytes = data[:-4], data[-4:]
    if struct.unpack("<I", crc_bytes)[0] != zlib.crc32(body):
        raise CorruptPayload("checksum mismatch")
    rd = _Reader(body)
    if rd.take(len(MAGIC)) != MAGIC:
        raise CorruptPayload("bad magic bytes")
    version = rd.take(1)[0]
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"model format version {version}, this build reads {FORMAT_VERSION}")
    try:
        header = json.loads(rd.take(rd.take_u32()).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptPayload(f"unreadable header: {exc}") from None
    try:
        arch = header["arch"]
        n_labels = int(header["n_labels"])
        manifest = header["arrays"]
        params = NetworkParameters(
            arch=arch,
            layers1=tuple(LayerParams.zeros(int(header["input_dim"]), int(header["hidden1"]))
                          for _ in range(2 if arch == "bdlstm" else 1)),
            layers2=tuple(LayerParams.zeros(
                int(header["hidden1"]) * (2 if arch == "bdlstm" else 1), int(header["hidden2"]))
                for _ in range(2 if arch == "bdlstm" else 1)),
            w_out=np.zeros((int(header["hidden2"]) * (2 if arch == "bdlstm" else 1), n_labels)),
            b_out=np.zeros(n_labels),
            dropout_rate=float(header["dropout_rate"]),
            rng_seed=int(header["rng_seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptPayload(f"invalid header fields: {exc}") from None
    if arch not in ("lstm", "bdlstm"):
        raise CorruptPayload(f"unknown architecture tag {arch!r}")
    if len(header.get("labels", [])) != n_labels:
        raise CorruptPayload("label list length does not match n_labels")

    arrays = params.flat_arrays()
    if len(manifest) != len(arrays):
        raise CorruptPayload(
            f"array manifest has {len(manifest)} entries, expected {len(arrays)}")
    for entry, (name, arr) in zip(manifest, arrays):
        if entry.get("name") != name or tuple(entry.get("shape", ())) != arr.shape:
            raise CorruptPayload(f"array manifest entry {entry!r} does not match {name} {arr.shape}")
        raw = rd.take(rd.take_u32())
        if len(raw) != arr.size * 4:
            raise CorruptPayload(f"array {name} has {len(raw)} bytes, expected {arr.size * 4}")
        values = np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(arr.shape)
        if not np.all(np.isfinite(values)):
            raise CorruptPayload(f"array {name} contains non-finite values")
        arr[...] = values
    if rd.pos != len(body):
        raise CorruptPayload("trailing bytes after the last array")
    return params


def load_header(data: bytes) -> dict:
    """Header fields only, checksum verified; used by the CLI to recover
    labels and encoding settings without rebuilding arrays."""
    body, crc_bytes = data[:-4], data[-4:]
    if len(data) < 14 or struct.unpack("<I", crc_bytes)[0] != zlib.crc32(body):
        raise CorruptPayload("checksum mismatch")
    rd = _Reader(body)
    if rd.take(len(MAGIC)) != MAGIC:
        raise CorruptPayload("bad magic bytes")
    version = rd.take(1)[0]
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"model format version {version}, this build reads {FORMAT_VERSION}")
    try:
        return json.loads(rd.take(rd.take_u32()).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptPayload(f"unreadable header: {exc}") from None
