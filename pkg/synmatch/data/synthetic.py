# coding: utf-8

"""
    SynMatch

    Desk-scale synthetic segmentation corpus: value-noise backgrounds with
    textured ellipses and annuli per foreground class. Labels are exact by
    construction and every file is a pure function of (seed, index).
"""  # noqa: E501

from __future__ import annotations

import logging
import os
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from synmatch.data.formats import image_suffix, save_manifest, write_image, write_label
from synmatch.data.scribble import IGNORE_INDEX, derive_scribbles
from synmatch.exceptions import ConfigError
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.sample import Sample

logger = logging.getLogger(__name__)

AREA_MIN = 0.05
AREA_MAX = 0.40
MAX_ATTEMPTS = 50
BACKGROUND_RANGE = (0.05, 0.35)
TEXTURE_AMPLITUDE = 0.08


def class_level(cls: int, classes: int) -> float:
    """Mean intensity of foreground class `cls`."""
    if classes <= 2:
        return 0.7
    return 0.5 + 0.4 * (cls - 1) / (classes - 2)


def value_noise(size: int, rng: np.random.Generator, cell: int = 8) -> np.ndarray:
    coarse = rng.uniform(0.0, 1.0, size=(max(2, size // cell), max(2, size // cell)))
    fine = ndimage.zoom(coarse, size / coarse.shape[0], order=1, mode="nearest")[:size, :size]
    lo, hi = BACKGROUND_RANGE
    return lo + (hi - lo) * fine


def _texture(kind: int, yy: np.ndarray, xx: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if kind % 2:
        phi = rng.uniform(0.0, np.pi)
        period = rng.uniform(3.0, 6.0)
        return np.sin(2.0 * np.pi * (xx * np.cos(phi) + yy * np.sin(phi)) / period)
    cell = int(rng.integers(2, 5))
    return np.where(((yy // cell) + (xx // cell)) % 2 == 0, 1.0, -1.0)


def _structure(size: int, area: float, rng: np.random.Generator, yy: np.ndarray, xx: np.ndarray) -> np.ndarray:
    annulus = bool(rng.random() < 0.5)
    outer_area = area / 0.75 if annulus else area
    ratio = rng.uniform(0.6, 1.0)
    a = max(1.5, np.sqrt(outer_area / (np.pi * ratio)))
    b = max(1.5, a * ratio)
    margin = min(a, size / 2.0 - 1.0)
    cy = rng.uniform(margin, size - margin)
    cx = rng.uniform(margin, size - margin)
    theta = rng.uniform(0.0, np.pi)
    dy, dx = yy - cy, xx - cx
    u = dx * np.cos(theta) + dy * np.sin(theta)
    v = -dx * np.sin(theta) + dy * np.cos(theta)
    r2 = (u / a) ** 2 + (v / b) ** 2
    if annulus:
        return (r2 <= 1.0) & (r2 > 0.25)
    return r2 <= 1.0


def render_sample(size: int, classes: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """One grayscale image [1, H, W] in [0, 1] and its dense label [H, W]."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    label = np.zeros((size, size), dtype=np.uint8)
    for _ in range(MAX_ATTEMPTS):
        label[:] = 0
        share = rng.uniform(0.1, 0.3) * size * size / (classes - 1)
        for cls in range(1, classes):
            count = int(rng.integers(1, 3))
            for _k in range(count):
                label[_structure(size, share / count, rng, yy, xx)] = cls
        fraction = float((label > 0).mean())
        present = all(int((label == c).sum()) >= 9 for c in range(1, classes))
        if AREA_MIN <= fraction <= AREA_MAX and present:
            break
    image = value_noise(size, rng)
    for cls in range(1, classes):
        mask = label == cls
        texture = _texture(cls, yy, xx, rng)
        image[mask] = class_level(cls, classes) + TEXTURE_AMPLITUDE * texture[mask]
    image = image + rng.normal(0.0, 0.02, size=image.shape)
    return np.clip(image, 0.0, 1.0)[None].astype(np.float32), label


def tint(gray: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Per-image colour cast over a grayscale image: [1, H, W] -> [3, H, W]."""
    gains = rng.uniform(0.8, 1.2, size=3)
    return np.clip(gray * gains[:, None, None], 0.0, 1.0).astype(np.float32)


def dominant_class(label: np.ndarray, classes: int) -> int:
    counts = np.bincount(label.reshape(-1), minlength=classes)[1:classes]
    return int(np.argmax(counts)) + 1 if counts.sum() else 0


def generate_synthetic_dataset(
    out_dir: str,
    n: int = 250,
    size: int = 64,
    classes: int = 3,
    seed: int = 0,
    channels: int = 1,
    name: Optional[str] = None,
    ignore_index: int = IGNORE_INDEX,
) -> DatasetManifest:
    """Write images, dense labels, scribbles and manifest.json under `out_dir`."""
    if size % 8:
        raise ConfigError("size must be divisible by 8", ["gen-data", "size"])
    if classes < 2:
        raise ConfigError("need at least two classes", ["gen-data", "classes"])
    if channels not in (1, 3):
        raise ConfigError("channels must be 1 or 3", ["gen-data", "channels"])
    if n < 1:
        raise ConfigError("need at least one sample", ["gen-data", "n"])
    if not 0 <= ignore_index <= 255 or 0 <= ignore_index < classes:
        raise ConfigError("ignore_index must fit in u8 outside the class range", ["gen-data", "ignore_index"])
    for sub in ("images", "labels", "scribbles"):
        os.makedirs(os.path.join(out_dir, sub), exist_ok=True)

    samples: List[Sample] = []
    for index in range(n):
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        image, label = render_sample(size, classes, rng)
        if channels == 3:
            image = tint(image, rng)
        scribble = derive_scribbles(label, np.random.default_rng(np.random.SeedSequence([seed, index, 1])), ignore_index)
        sample_id = "img_{0:04d}".format(index)
        image_path = os.path.join("images", sample_id + image_suffix(channels))
        label_path = os.path.join("labels", sample_id + ".pgm")
        scribble_path = os.path.join("scribbles", sample_id + ".pgm")
        write_image(os.path.join(out_dir, image_path), image)
        write_label(os.path.join(out_dir, label_path), label)
        write_label(os.path.join(out_dir, scribble_path), scribble)
        samples.append(Sample(id=sample_id, image_path=image_path, gt_path=label_path,
                              scribble_path=scribble_path, dominant_class=dominant_class(label, classes)))

    manifest = DatasetManifest(name=name or os.path.basename(os.path.normpath(out_dir)) or "synthetic",
                               num_classes=classes, in_channels=channels, image_size=size,
                               samples=samples, seed=seed, ignore_index=ignore_index)
    save_manifest(manifest, out_dir)
    logger.info("generated %d samples of %dx%d with %d classes in %s", n, size, size, classes, out_dir)
    return manifest
