"""Tagged, checksummed binary bundles of named tensors plus JSON metadata.

Layout: an ASCII format-tag line, a little-endian uint64 header length,
a canonical-JSON header describing metadata and the tensor table
(name, shape, dtype, byte offset), the raw little-endian tensor bytes,
and a trailing SHA-256 over everything before it.  Saving the result of a
load reproduces the file byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct

import numpy as np

from .errors import ChecksumMismatch, VersionMismatch

_CHECKSUM_LEN = 32


def _canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_bundle(
    path: str | os.PathLike,
    tag: str,
    meta: dict,
    tensors: dict[str, np.ndarray],
) -> None:
    """Write a tensor bundle atomically (temp file + rename)."""
    table = []
    blobs = []
    offset = 0
    for name in sorted(tensors):
        arr = np.ascontiguousarray(tensors[name])
        le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
        raw = le.tobytes()
        table.append(
            {
                "name": name,
                "shape": list(arr.shape),
                "dtype": np.dtype(arr.dtype).str.lstrip("<=|>"),
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        blobs.append(raw)
        offset += len(raw)
    header = _canonical_json({"meta": meta, "tensors": table})
    payload = b"".join(
        [
            tag.encode("ascii") + b"\n",
            struct.pack("<Q", len(header)),
            header,
            b"".join(blobs),
        ]
    )
    digest = hashlib.sha256(payload).digest()
    tmp = str(path) + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
        fh.write(digest)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_bundle(
    path: str | os.PathLike, tag: str
) -> tuple[dict, dict[str, np.ndarray]]:
    """Read a bundle back; returns (meta, tensors).

    Raises :class:`VersionMismatch` when the format tag differs and
    :class:`ChecksumMismatch` on truncation or corruption.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    newline = data.find(b"\n")
    if newline < 0 or newline > 64:
        raise ChecksumMismatch("missing format tag line")
    found_tag = data[:newline].decode("ascii", errors="replace")
    if found_tag != tag:
        raise VersionMismatch(f"expected tag {tag!r}, found {found_tag!r}")
    payload, digest = data[:-_CHECKSUM_LEN], data[-_CHECKSUM_LEN:]
    if len(data) < newline + 9 + _CHECKSUM_LEN:
        raise ChecksumMismatch("file truncated")
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch("checksum disagreement")
    pos = newline + 1
    (header_len,) = struct.unpack_from("<Q", payload, pos)
    pos += 8
    header = json.loads(payload[pos : pos + header_len].decode("utf-8"))
    pos += header_len
    tensors: dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        start = pos + entry["offset"]
        raw = payload[start : start + entry["nbytes"]]
        if len(raw) != entry["nbytes"]:
            raise ChecksumMismatch(f"tensor {entry['name']} truncated")
        arr = np.frombuffer(raw, dtype=np.dtype(entry["dtype"]).newbyteorder("<"))
        tensors[entry["name"]] = (
            arr.reshape(entry["shape"]).astype(entry["dtype"], copy=True)
        )
    return header["meta"], tensors
