# coding: utf-8

"""
    SynMatch

    Weak and strong views with replayable records. Geometry (crop, right-angle
    rotation, flips) is nearest-neighbour for images and labels alike, so a
    record applied to an image and to its label map keeps them pixel-aligned.
    Strong views reuse the weak geometry and add intensity jitter, blur and
    batch-level CutMix or Mixup.

    Images are [C, H, W] arrays in [0, 1]; label and confidence maps are
    [H, W]. Batch helpers take a leading N axis.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage

from synmatch.exceptions import ConfigError, ShapeMismatchError
from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.augmentation_record import AugmentationRecord, GeometricParams, IntensityParams, MixParams
from synmatch.models.mix_mode import MixMode

logger = logging.getLogger(__name__)

Seed = Union[int, Sequence[int], np.random.Generator]


def as_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed))


def _check_square(x: np.ndarray, op: str) -> int:
    h, w = x.shape[-2], x.shape[-1]
    if h != w:
        raise ShapeMismatchError("augmentation needs square inputs", [op, "x", x.ndim - 1], expected=h, actual=w)
    return h


def _resample_index(start: int, length: int, size: int) -> np.ndarray:
    # nearest source pixel of each output pixel centre
    return start + ((2 * np.arange(size) + 1) * length) // (2 * size)


def apply_geometric(x: np.ndarray, geo: GeometricParams) -> np.ndarray:
    """Crop, resize back, rotate and flip the last two axes of `x`."""
    if x.shape[-1] != geo.size or x.shape[-2] != geo.size:
        raise ShapeMismatchError("record was drawn for another image size", ["apply_geometric", "x"],
                                 expected=geo.size, actual=x.shape[-2:])
    out = x
    if not geo.is_full_frame:
        assert geo.crop_size is not None
        rows = _resample_index(geo.crop_top, geo.crop_size, geo.size)
        cols = _resample_index(geo.crop_left, geo.crop_size, geo.size)
        out = out[..., rows[:, None], cols[None, :]]
    if geo.rotation:
        out = np.rot90(out, k=geo.rotation // 90, axes=(-2, -1))
    if geo.flip_h:
        out = out[..., :, ::-1]
    if geo.flip_v:
        out = out[..., ::-1, :]
    return np.ascontiguousarray(out)


def apply_intensity(x: np.ndarray, params: IntensityParams) -> np.ndarray:
    """Contrast around the per-image mean, brightness offset, optional blur, clamp to [0, 1]."""
    mean = x.mean()
    out = (x - mean) * params.contrast + mean + params.brightness
    if params.blur_sigma is not None:
        # blur spatial axes only
        sigma = (0.0,) * (out.ndim - 2) + (params.blur_sigma, params.blur_sigma)
        out = ndimage.gaussian_filter(out, sigma=sigma, mode="reflect")
    return np.clip(out, 0.0, 1.0).astype(x.dtype, copy=False)


def draw_geometric(size: int, rng: np.random.Generator, config: AugmentationConfig) -> GeometricParams:
    scale = rng.uniform(config.crop_scale_min, config.crop_scale_max)
    crop = int(min(size, max(1, round(scale * size))))
    top = int(rng.integers(0, size - crop + 1))
    left = int(rng.integers(0, size - crop + 1))
    rotation = int(rng.choice([0, 90, 180, 270])) if config.rotate else 0
    flip_h = bool(rng.random() < 0.5) if config.flip else False
    flip_v = bool(rng.random() < 0.5) if config.flip else False
    if crop == size:
        return GeometricParams(size=size, rotation=rotation, flip_h=flip_h, flip_v=flip_v)
    return GeometricParams(size=size, crop_top=top, crop_left=left, crop_size=crop,
                           rotation=rotation, flip_h=flip_h, flip_v=flip_v)


def draw_intensity(rng: np.random.Generator, config: AugmentationConfig) -> IntensityParams:
    brightness = rng.uniform(-config.brightness, config.brightness)
    contrast = rng.uniform(1.0 - config.contrast, 1.0 + config.contrast)
    blur = None
    if rng.random() < config.blur_prob:
        blur = float(rng.uniform(config.blur_sigma_min, config.blur_sigma_max))
    return IntensityParams(brightness=float(brightness), contrast=float(contrast), blur_sigma=blur)


def weak_view(x: np.ndarray, seed: Seed, config: Optional[AugmentationConfig] = None) -> Tuple[np.ndarray, AugmentationRecord]:
    """Random crop (resized back), right-angle rotation and flips."""
    config = config or AugmentationConfig()
    size = _check_square(x, "weak_view")
    record = AugmentationRecord(geometric=draw_geometric(size, as_rng(seed), config))
    return replay(x, record), record


def strong_view(
    x: np.ndarray,
    base: Optional[AugmentationRecord],
    seed: Seed,
    config: Optional[AugmentationConfig] = None,
) -> Tuple[np.ndarray, AugmentationRecord]:
    """The weak geometry of `base` followed by intensity jitter and blur.

    Batch-partner mixing is added afterwards by `mix_batch`.
    """
    if base is None:
        raise ConfigError("strong_view needs the weak record of the same sample", ["strong_view", "base"])
    config = config or AugmentationConfig()
    _check_square(x, "strong_view")
    intensity = draw_intensity(as_rng(seed), config) if config.intensity else None
    record = AugmentationRecord(geometric=base.geometric, intensity=intensity)
    return replay(x, record), record


def replay(x: np.ndarray, record: AugmentationRecord) -> np.ndarray:
    """Apply the geometric and intensity parts of `record` to an image."""
    out = apply_geometric(x, record.geometric)
    if record.intensity is not None:
        out = apply_intensity(out, record.intensity)
    return out


def apply_to_label(record: AugmentationRecord, y: np.ndarray, partner: Optional[np.ndarray] = None) -> np.ndarray:
    """Nearest-neighbour geometry of `record` applied to a label or confidence map.

    When the record carries a mix and `partner` (already in the output frame)
    is given, the partner's values are pasted with the same box.
    """
    out = apply_geometric(y, record.geometric)
    if record.mix is not None and partner is not None:
        out = _mix_map(out, partner, record.mix)
    return out


def _mix_map(own: np.ndarray, partner: np.ndarray, mix: MixParams) -> np.ndarray:
    if own.shape != partner.shape:
        raise ShapeMismatchError("mix partner differs in shape", ["apply_mix", "partner"],
                                 expected=own.shape, actual=partner.shape)
    out = own.copy()
    if mix.mode == MixMode.CUTMIX:
        assert mix.box is not None
        top, left, bottom, right = mix.box
        out[..., top:bottom, left:right] = partner[..., top:bottom, left:right]
    elif mix.mode == MixMode.MIXUP and mix.lam is not None and mix.lam < 0.5:
        # hard targets follow the dominant image
        out = partner.copy()
    return out


def _mix_image(own: np.ndarray, partner: np.ndarray, mix: MixParams) -> np.ndarray:
    if mix.mode == MixMode.MIXUP:
        assert mix.lam is not None
        return (mix.lam * own + (1.0 - mix.lam) * partner).astype(own.dtype, copy=False)
    return _mix_map(own, partner, mix)


def draw_mix(index: int, n: int, size: int, rng: np.random.Generator, config: AugmentationConfig) -> Optional[MixParams]:
    if config.mix_mode == MixMode.NONE or n < 2 or rng.random() >= config.mix_prob:
        return None
    partner = int(rng.integers(0, n - 1))
    if partner >= index:
        partner += 1
    if config.mix_mode == MixMode.MIXUP:
        b = rng.beta(config.mixup_alpha, config.mixup_alpha)
        return MixParams(mode=MixMode.MIXUP, partner_index=partner, lam=float(max(b, 1.0 - b)))
    area = rng.uniform(config.cutmix_area_min, config.cutmix_area_max)
    side = int(round(np.sqrt(area) * size))
    top = int(rng.integers(0, size - side + 1))
    left = int(rng.integers(0, size - side + 1))
    return MixParams(mode=MixMode.CUTMIX, partner_index=partner, box=(top, left, top + side, left + side))


def mix_batch(
    images: np.ndarray,
    records: Sequence[AugmentationRecord],
    seed: Seed,
    config: Optional[AugmentationConfig] = None,
) -> Tuple[np.ndarray, List[AugmentationRecord]]:
    """Mix strong views with batch partners; partners are read from the unmixed batch."""
    config = config or AugmentationConfig()
    rng = as_rng(seed)
    n = images.shape[0]
    size = images.shape[-1]
    out = images.copy()
    mixed: List[AugmentationRecord] = []
    for i, record in enumerate(records):
        mix = draw_mix(i, n, size, rng, config)
        if mix is not None:
            out[i] = _mix_image(images[i], images[mix.partner_index], mix)
            record = record.model_copy(update={"mix": mix})
        mixed.append(record)
    return out, mixed


def apply_mix(maps: np.ndarray, records: Sequence[AugmentationRecord]) -> np.ndarray:
    """Mix a batch of output-frame maps (pseudo labels, confidences) like `mix_batch` mixed the images."""
    if maps.shape[0] != len(records):
        raise ShapeMismatchError("one record per map", ["apply_mix", "records"],
                                 expected=maps.shape[0], actual=len(records))
    out = maps.copy()
    for i, record in enumerate(records):
        if record.mix is not None:
            out[i] = _mix_map(maps[i], maps[record.mix.partner_index], record.mix)
    return out


def weak_batch(images: np.ndarray, seeds: Sequence[Seed], config: Optional[AugmentationConfig] = None) -> Tuple[np.ndarray, List[AugmentationRecord]]:
    views, records = zip(*(weak_view(x, s, config) for x, s in zip(images, seeds)))
    return np.stack(views), list(records)


def strong_batch(images: np.ndarray, bases: Sequence[AugmentationRecord], seeds: Sequence[Seed],
                 config: Optional[AugmentationConfig] = None) -> Tuple[np.ndarray, List[AugmentationRecord]]:
    views, records = zip(*(strong_view(x, b, s, config) for x, b, s in zip(images, bases, seeds)))
    return np.stack(views), list(records)
