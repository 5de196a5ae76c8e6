"""Versioned binary checkpoint format shared by classifier, acoustic model
and vocoder.

Layout: ``EMTS`` magic, uint32 format version, uint64 header length, a JSON
header (kind, config, tensor manifest), then raw little-endian C-order
tensor bytes. Writes are atomic (temp file + rename).
"""

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import IoError, WeightMismatch

MAGIC = b"EMTS"
FORMAT_VERSION = 1

_HEADER_STRUCT = struct.Struct("<4sIQ")


def save_checkpoint(path, kind: str, config: dict, tensors: dict) -> None:
    """Atomically persist named float/int arrays with a JSON config header."""
    path = Path(path)
    manifest = []
    blobs = []
    offset = 0
    for name, array in tensors.items():
        array = np.ascontiguousarray(array)
        dtype = array.dtype.newbyteorder("<")
        blob = array.astype(dtype, copy=False).tobytes()
        manifest.append(
            {
                "name": name,
                "dtype": array.dtype.name,
                "shape": list(array.shape),
                "offset": offset,
                "nbytes": len(blob),
            }
        )
        blobs.append(blob)
        offset += len(blob)
    header = json.dumps(
        {"kind": kind, "config": config, "tensors": manifest},
        separators=(",", ":"),
    ).encode("utf-8")

    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(_HEADER_STRUCT.pack(MAGIC, FORMAT_VERSION, len(header)))
            f.write(header)
            for blob in blobs:
                f.write(blob)
        os.replace(tmp_name, path)
    except OSError as exc:
        os.unlink(tmp_name)
        raise IoError(f"cannot write checkpoint {path}: {exc}") from exc


def load_checkpoint(path):
    """Read a checkpoint: (kind, config, {name: ndarray})."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read checkpoint {path}: {exc}") from exc
    if len(raw) < _HEADER_STRUCT.size:
        raise IoError(f"{path}: truncated checkpoint")
    magic, version, header_len = _HEADER_STRUCT.unpack_from(raw)
    if magic != MAGIC:
        raise IoError(f"{path}: not an emotts checkpoint")
    if version != FORMAT_VERSION:
        raise IoError(f"{path}: unsupported checkpoint version {version}")
    header_end = _HEADER_STRUCT.size + header_len
    header = json.loads(raw[_HEADER_STRUCT.size : header_end].decode("utf-8"))
    data = raw[header_end:]
    tensors = {}
    for entry in header["tensors"]:
        blob = data[entry["offset"] : entry["offset"] + entry["nbytes"]]
        array = np.frombuffer(blob, dtype=np.dtype(entry["dtype"]).newbyteorder("<"))
        tensors[entry["name"]] = array.reshape(entry["shape"]).astype(
            entry["dtype"], copy=False
        )
    return header["kind"], header["config"], tensors


def state_dict_to_arrays(state_dict) -> dict:
    return {k: v.detach().cpu().numpy() for k, v in state_dict.items()}


def load_state_into(module, tensors: dict) -> None:
    """Copy checkpoint arrays into a torch module, validating shapes.

    Raises WeightMismatch naming the first offending layer.
    """
    import torch

    state = module.state_dict()
    for name, current in state.items():
        if name not in tensors:
            raise WeightMismatch(name, tuple(current.shape), "missing tensor")
        array = tensors[name]
        if tuple(array.shape) != tuple(current.shape):
            raise WeightMismatch(name, tuple(current.shape), tuple(array.shape))
    extra = [n for n in tensors if n not in state]
    if extra:
        raise WeightMismatch(extra[0], "no such layer", tuple(tensors[extra[0]].shape))
    module.load_state_dict(
        {k: torch.from_numpy(v.copy()) for k, v in tensors.items()}
    )
