# coding: utf-8

"""
    SynMatch

    On-disk formats: the STEN1 tensor container, 8-bit PGM/PPM images and
    label maps, and the JSON dataset manifest.

    STEN1 layout (little endian):
        magic    5 bytes  b"STEN1"
        dtype    u8       0 = f32, 1 = u8
        rank     u8
        dims     rank x u32
        payload  prod(dims) x itemsize, row-major
"""  # noqa: E501

from __future__ import annotations

import logging
import os
import struct
from typing import Optional, Tuple

import numpy as np
from PIL import Image

from synmatch.exceptions import FormatError, TruncatedFileError
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.dtype_code import DtypeCode

logger = logging.getLogger(__name__)

STEN_MAGIC = b"STEN1"
MANIFEST_NAME = "manifest.json"

_DTYPES = {
    DtypeCode.F32: np.dtype("<f4"),
    DtypeCode.U8: np.dtype("u1"),
}


def _code_for(array: np.ndarray) -> DtypeCode:
    if array.dtype == np.float32:
        return DtypeCode.F32
    if array.dtype == np.uint8:
        return DtypeCode.U8
    raise FormatError("STEN1 stores float32 or uint8, got {0}".format(array.dtype))


def encode_tensor(array: np.ndarray) -> bytes:
    array = np.asarray(array)
    code = _code_for(array)
    if array.ndim > 255:
        raise FormatError("rank {0} does not fit in one byte".format(array.ndim))
    header = STEN_MAGIC + struct.pack("<BB", int(code), array.ndim)
    header += struct.pack("<{0}I".format(array.ndim), *array.shape)
    return header + np.ascontiguousarray(array, dtype=_DTYPES[code]).tobytes()


def decode_tensor(buf: bytes, offset: int = 0, path: Optional[str] = None) -> Tuple[np.ndarray, int]:
    """Decode one container starting at `offset`; returns the array and the offset past it."""
    end = offset + len(STEN_MAGIC) + 2
    if len(buf) < end:
        raise TruncatedFileError("tensor header cut short", path, offset)
    if buf[offset:offset + len(STEN_MAGIC)] != STEN_MAGIC:
        raise FormatError("bad tensor magic", path, offset)
    code_value, rank = struct.unpack_from("<BB", buf, offset + len(STEN_MAGIC))
    try:
        code = DtypeCode(code_value)
    except ValueError:
        raise FormatError("unknown dtype code {0}".format(code_value), path, offset + len(STEN_MAGIC))
    if len(buf) < end + 4 * rank:
        raise TruncatedFileError("tensor dims cut short", path, end)
    dims = struct.unpack_from("<{0}I".format(rank), buf, end)
    end += 4 * rank
    dtype = _DTYPES[code]
    nbytes = int(np.prod(dims, dtype=np.int64)) * dtype.itemsize
    if len(buf) < end + nbytes:
        raise TruncatedFileError("tensor payload cut short ({0} of {1} bytes)".format(len(buf) - end, nbytes), path, end)
    array = np.frombuffer(buf, dtype=dtype, count=nbytes // dtype.itemsize, offset=end).reshape(dims).copy()
    return array, end + nbytes


def write_tensor(path: str, array: np.ndarray) -> None:
    with open(path, "wb") as handle:
        handle.write(encode_tensor(array))


def read_tensor(path: str) -> np.ndarray:
    with open(path, "rb") as handle:
        buf = handle.read()
    array, end = decode_tensor(buf, 0, path)
    if end != len(buf):
        raise FormatError("trailing bytes after tensor", path, end)
    return array


# -- images and label maps --------------------------------------------------

def image_suffix(channels: int) -> str:
    return ".ppm" if channels == 3 else ".pgm"


def write_image(path: str, image: np.ndarray) -> None:
    """[C, H, W] floats in [0, 1] -> 8-bit PGM (C=1) or PPM (C=3)."""
    if image.ndim != 3 or image.shape[0] not in (1, 3):
        raise FormatError("images must be [1|3, H, W], got {0}".format(image.shape), path)
    data = np.clip(np.rint(np.asarray(image, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)
    if data.shape[0] == 1:
        Image.fromarray(data[0]).save(path, format="PPM")
    else:
        Image.fromarray(np.ascontiguousarray(np.moveaxis(data, 0, -1))).save(path, format="PPM")


def read_image(path: str) -> np.ndarray:
    """8-bit PGM/PPM -> float32 [C, H, W] in [0, 1]."""
    with Image.open(path) as img:
        if img.mode not in ("L", "RGB"):
            raise FormatError("unsupported image mode {0}".format(img.mode), path)
        data = np.asarray(img, dtype=np.uint8)
    if data.ndim == 2:
        data = data[None]
    else:
        data = np.moveaxis(data, -1, 0)
    return data.astype(np.float32) / np.float32(255.0)


def write_label(path: str, label: np.ndarray) -> None:
    """[H, W] integer map -> 8-bit PGM holding the raw class values."""
    label = np.asarray(label)
    if label.ndim != 2:
        raise FormatError("label maps must be [H, W], got {0}".format(label.shape), path)
    if label.size and (label.min() < 0 or label.max() > 255):
        raise FormatError("label values must fit in u8", path)
    Image.fromarray(label.astype(np.uint8)).save(path, format="PPM")


def read_label(path: str) -> np.ndarray:
    with Image.open(path) as img:
        if img.mode != "L":
            raise FormatError("label maps must be 8-bit grayscale, got {0}".format(img.mode), path)
        return np.asarray(img, dtype=np.uint8).astype(np.int64)


# -- manifest ------------------------------------------------------------------

def save_manifest(manifest: DatasetManifest, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, MANIFEST_NAME)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(manifest.model_dump_json(indent=2, exclude_none=True))
        handle.write("\n")
    os.replace(tmp, path)
    manifest.set_root(directory)
    logger.debug("wrote manifest %s (%d samples)", path, len(manifest.samples))
    return path


def load_manifest(directory: str) -> DatasetManifest:
    path = directory
    if os.path.isdir(directory):
        path = os.path.join(directory, MANIFEST_NAME)
    if not os.path.exists(path):
        raise FormatError("no manifest found", path)
    with open(path, "r", encoding="utf-8") as handle:
        manifest = DatasetManifest.from_json(handle.read())
    assert manifest is not None
    manifest.set_root(os.path.dirname(os.path.abspath(path)))
    return manifest


def resolve(manifest: DatasetManifest, relative: str) -> str:
    root = manifest.root or "."
    return os.path.join(root, relative)
