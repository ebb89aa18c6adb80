# coding: utf-8

"""
    SynMatch

    Named-tensor archives and model/optimizer checkpoints.

    Archive layout (little endian):
        magic    4 bytes  b"SMCK"
        version  u8       1
        count    u32
        count records of
            name length  u32
            name         utf-8
            tensor       STEN1 container
"""  # noqa: E501

from __future__ import annotations

import json
import logging
import os
import struct
from typing import Dict, Mapping, Optional

import numpy as np

from synmatch.data.formats import decode_tensor, encode_tensor
from synmatch.exceptions import FormatError, TruncatedFileError
from synmatch.models.unet_config import UNetConfig
from synmatch.optim import AdamW
from synmatch.unet import UNetModel, init_model

logger = logging.getLogger(__name__)

ARCHIVE_MAGIC = b"SMCK"
ARCHIVE_VERSION = 1
MODEL_CONFIG_KEY = "meta.model_config"


class CheckpointInfo:
    """Bookkeeping restored alongside the parameters."""

    def __init__(self, epoch: int = 0, step: int = 0, best_epoch: int = 0, best_mean_dsc: float = 0.0) -> None:
        self.epoch = epoch
        self.step = step
        self.best_epoch = best_epoch
        self.best_mean_dsc = best_mean_dsc

    def to_arrays(self) -> Dict[str, np.ndarray]:
        # meta scalars are JSON text in u8 tensors so floats survive exactly
        return {
            "meta.epoch": _json_array(int(self.epoch)),
            "meta.step": _json_array(int(self.step)),
            "meta.best_epoch": _json_array(int(self.best_epoch)),
            "meta.best_mean_dsc": _json_array(float(self.best_mean_dsc)),
        }

    @classmethod
    def from_arrays(cls, arrays: Mapping[str, np.ndarray]) -> "CheckpointInfo":
        def scalar(key: str) -> float:
            if key not in arrays:
                return 0.0
            array = arrays[key]
            if array.dtype == np.uint8:
                return float(json.loads(array.tobytes().decode("utf-8")))
            return float(array.reshape(-1)[0])

        return cls(epoch=int(scalar("meta.epoch")), step=int(scalar("meta.step")),
                   best_epoch=int(scalar("meta.best_epoch")), best_mean_dsc=scalar("meta.best_mean_dsc"))


def _json_array(value: float) -> np.ndarray:
    return np.frombuffer(json.dumps(value).encode("utf-8"), dtype=np.uint8).copy()


def encode_archive(arrays: Mapping[str, np.ndarray]) -> bytes:
    parts = [ARCHIVE_MAGIC, struct.pack("<BI", ARCHIVE_VERSION, len(arrays))]
    for name, array in arrays.items():
        raw = name.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(encode_tensor(array))
    return b"".join(parts)


def decode_archive(buf: bytes, path: Optional[str] = None) -> Dict[str, np.ndarray]:
    header = len(ARCHIVE_MAGIC) + 5
    if len(buf) < header:
        raise TruncatedFileError("archive header cut short", path, 0)
    if buf[:len(ARCHIVE_MAGIC)] != ARCHIVE_MAGIC:
        raise FormatError("bad archive magic", path, 0)
    version, count = struct.unpack_from("<BI", buf, len(ARCHIVE_MAGIC))
    if version != ARCHIVE_VERSION:
        raise FormatError("unsupported archive version {0}".format(version), path, len(ARCHIVE_MAGIC))
    offset = header
    arrays: Dict[str, np.ndarray] = {}
    for _ in range(count):
        if len(buf) < offset + 4:
            raise TruncatedFileError("record header cut short", path, offset)
        (length,) = struct.unpack_from("<I", buf, offset)
        offset += 4
        if len(buf) < offset + length:
            raise TruncatedFileError("record name cut short", path, offset)
        name = buf[offset:offset + length].decode("utf-8")
        offset += length
        arrays[name], offset = decode_tensor(buf, offset, path)
    if offset != len(buf):
        raise FormatError("trailing bytes after {0} records".format(count), path, offset)
    return arrays


def write_archive(path: str, arrays: Mapping[str, np.ndarray]) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as handle:
        handle.write(encode_archive(arrays))
    os.replace(tmp, path)


def read_archive(path: str) -> Dict[str, np.ndarray]:
    with open(path, "rb") as handle:
        return decode_archive(handle.read(), path)


def _config_array(config: UNetConfig) -> np.ndarray:
    return np.frombuffer(config.to_json().encode("utf-8"), dtype=np.uint8).copy()


def save_checkpoint(
    path: str,
    model: UNetModel,
    optimizer: Optional[AdamW] = None,
    info: Optional[CheckpointInfo] = None,
) -> None:
    arrays: Dict[str, np.ndarray] = {MODEL_CONFIG_KEY: _config_array(model.config)}
    arrays.update((info or CheckpointInfo()).to_arrays())
    arrays.update({"param." + name: value for name, value in model.state_arrays().items()})
    if optimizer is not None:
        arrays.update(optimizer.state_arrays())
    write_archive(path, arrays)
    logger.debug("saved checkpoint %s (%d tensors)", path, len(arrays))


def read_model_config(arrays: Mapping[str, np.ndarray], path: Optional[str] = None) -> UNetConfig:
    if MODEL_CONFIG_KEY not in arrays:
        raise FormatError("checkpoint carries no model config", path)
    config = UNetConfig.from_dict(json.loads(arrays[MODEL_CONFIG_KEY].tobytes().decode("utf-8")))
    assert config is not None
    return config


def load_checkpoint(path: str, model: UNetModel, optimizer: Optional[AdamW] = None) -> CheckpointInfo:
    """Restore parameters (and optimizer moments) in place.

    Raises CheckpointMismatchError naming the first tensor that is missing
    or shaped differently from the model.
    """
    arrays = read_archive(path)
    params = {key[len("param."):]: value for key, value in arrays.items() if key.startswith("param.")}
    model.load_state_arrays(params)
    if optimizer is not None:
        optimizer.load_state_arrays({k: v for k, v in arrays.items() if k.startswith("optim.")})
    return CheckpointInfo.from_arrays(arrays)


def load_model(path: str) -> UNetModel:
    """Build a model from the config stored in the checkpoint and load its parameters."""
    arrays = read_archive(path)
    model = init_model(read_model_config(arrays, path))
    model.load_state_arrays({key[len("param."):]: value for key, value in arrays.items() if key.startswith("param.")})
    return model
