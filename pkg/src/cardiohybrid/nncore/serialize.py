"""Flat binary container for trained parameters.

Layout: ``b"CHNN"``, a format byte, a little-endian uint32 header length,
the UTF-8 JSON header (layer specs and tensor shapes), then every tensor as
little-endian float64 in layer order.
"""

import json
import struct

import numpy as np

from .layers import layer_from_json
from .model import ModelParams

MAGIC = b"CHNN"
VERSION = 1


def dumps(stack, params: ModelParams) -> bytes:
    tensors = []
    for i, p in enumerate(params.layers):
        for name, arr in p.items():
            tensors.append({"layer": i, "name": name, "shape": list(arr.shape)})
    header = json.dumps({"layers": [layer.to_json() for layer in stack], "tensors": tensors}, sort_keys=True).encode()
    body = b"".join(
        np.ascontiguousarray(arr, dtype="<f8").tobytes() for p in params.layers for arr in p.values()
    )
    return MAGIC + bytes([VERSION]) + struct.pack("<I", len(header)) + header + body


def loads(blob: bytes):
    if blob[:4] != MAGIC:
        raise ValueError("not a parameter container")
    if blob[4] != VERSION:
        raise ValueError(f"unsupported container version {blob[4]}")
    (hlen,) = struct.unpack("<I", blob[5:9])
    header = json.loads(blob[9:9 + hlen])
    stack = [layer_from_json(obj) for obj in header["layers"]]
    layers = [dict() for _ in stack]
    offset = 9 + hlen
    for t in header["tensors"]:
        size = int(np.prod(t["shape"], dtype=np.int64))
        arr = np.frombuffer(blob, dtype="<f8", count=size, offset=offset).astype(np.float64).reshape(t["shape"])
        layers[t["layer"]][t["name"]] = arr
        offset += 8 * size
    if offset != len(blob):
        raise ValueError("trailing bytes after the last tensor")
    return stack, ModelParams(layers)


def save(path, stack, params: ModelParams) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(stack, params))


def load(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
