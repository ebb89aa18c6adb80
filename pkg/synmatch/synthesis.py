# coding: utf-8

"""
    SynMatch

    Parameter-free image synthesis from the U-Net feature taps. The texture
    and shape taps of a weak view are reduced to one channel each, blended
    with a per-item weight alpha and, for RGB data, merged back into the
    chrominance of the weak view. Everything here works on detached arrays.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import Optional, Sequence, Union

import numpy as np

from synmatch.exceptions import ConfigError, NonFiniteError, ShapeMismatchError
from synmatch.models.fusion_mode import FusionMode
from synmatch.models.synthesized_image import SynthesizedImage
from synmatch.models.tapped_output import TappedOutput
from synmatch.tensor import Tensor

logger = logging.getLogger(__name__)

# ITU-R BT.601 luma weights
LUMA_R = 0.299
LUMA_G = 0.587
LUMA_B = 0.114
CB_SCALE = 2.0 * (1.0 - LUMA_B)
CR_SCALE = 2.0 * (1.0 - LUMA_R)

ArrayOrTensor = Union[np.ndarray, Tensor]


def _array(value: ArrayOrTensor) -> np.ndarray:
    if isinstance(value, Tensor):
        return value.data
    return np.asarray(value)


def reduce_feature(feat: ArrayOrTensor) -> Tensor:
    """Channel mean followed by per-sample min-max normalization to [0, 1].

    Constant maps become 0.5 everywhere.
    """
    data = _array(feat)
    if data.ndim != 4 or data.shape[1] < 1:
        raise ShapeMismatchError("feature must be [N, C, H, W] with C >= 1", ["reduce_feature", "feat"],
                                 expected=4, actual=data.shape)
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("non-finite feature map", ["reduce_feature"])
    mean = data.mean(axis=1, keepdims=True)
    lo = mean.min(axis=(1, 2, 3), keepdims=True)
    hi = mean.max(axis=(1, 2, 3), keepdims=True)
    span = hi - lo
    flat = span <= 0
    out = (mean - lo) / np.where(flat, 1.0, span)
    out = np.where(flat, 0.5, out)
    return Tensor(out)


def synthesize(texture: ArrayOrTensor, shape: ArrayOrTensor, alpha: Union[float, Sequence[float], np.ndarray]) -> Tensor:
    """alpha * texture + (1 - alpha) * shape, pixelwise.

    `alpha` is a scalar or one weight per batch item.
    """
    t = _array(texture)
    s = _array(shape)
    if t.shape != s.shape:
        raise ShapeMismatchError("texture and shape maps differ", ["synthesize", "shape"],
                                 expected=t.shape, actual=s.shape)
    a = np.asarray(alpha, dtype=t.dtype)
    if a.ndim == 1:
        if a.shape[0] != t.shape[0]:
            raise ShapeMismatchError("need one alpha per item", ["synthesize", "alpha"],
                                     expected=t.shape[0], actual=a.shape[0])
        a = a.reshape(-1, 1, 1, 1)
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ConfigError("alpha must lie in [0, 1]", ["synthesize", "alpha"])
    return Tensor(a * t + (1.0 - a) * s)


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    r, g, b = rgb[:, 0], rgb[:, 1], rgb[:, 2]
    y = LUMA_R * r + LUMA_G * g + LUMA_B * b
    return np.stack([y, (b - y) / CB_SCALE, (r - y) / CR_SCALE], axis=1)


def ycbcr_to_rgb(ycc: np.ndarray) -> np.ndarray:
    y, cb, cr = ycc[:, 0], ycc[:, 1], ycc[:, 2]
    r = y + CR_SCALE * cr
    b = y + CB_SCALE * cb
    g = (y - LUMA_R * r - LUMA_B * b) / LUMA_G
    return np.stack([r, g, b], axis=1)


def luminance_merge(synth_luma: ArrayOrTensor, original_rgb: ArrayOrTensor) -> Tensor:
    """Replace the BT.601 luma of `original_rgb` with `synth_luma` and clamp to [0, 1]."""
    luma = _array(synth_luma)
    rgb = _array(original_rgb)
    if rgb.ndim != 4 or rgb.shape[1] != 3:
        raise ShapeMismatchError("original must be [N, 3, H, W]", ["luminance_merge", "original_rgb", 1],
                                 expected=3, actual=rgb.shape)
    if luma.shape != (rgb.shape[0], 1) + rgb.shape[2:]:
        raise ShapeMismatchError("luma must be [N, 1, H, W] matching the original", ["luminance_merge", "synth_luma"],
                                 expected=(rgb.shape[0], 1) + rgb.shape[2:], actual=luma.shape)
    ycc = rgb_to_ycbcr(rgb.astype(np.float64))
    ycc[:, 0] = luma[:, 0]
    out = np.clip(ycbcr_to_rgb(ycc), 0.0, 1.0)
    return Tensor(out.astype(rgb.dtype))


def draw_alpha(rng: np.random.Generator, n: int, fusion: FusionMode = FusionMode.WEIGHTED) -> np.ndarray:
    if fusion == FusionMode.TEXTURE:
        return np.ones(n)
    if fusion == FusionMode.SHAPE:
        return np.zeros(n)
    return rng.uniform(0.0, 1.0, size=n)


def synthesize_batch(
    model_output: TappedOutput,
    rng: np.random.Generator,
    fusion: FusionMode = FusionMode.WEIGHTED,
    original: Optional[ArrayOrTensor] = None,
    source_index: Optional[Sequence[int]] = None,
) -> SynthesizedImage:
    """Synthesize one image per item of a weak-view forward pass.

    Pass `original` (the weak views themselves) for RGB data; the
    synthesized luma is then merged with their chrominance.
    """
    texture = reduce_feature(_array(model_output.texture).copy())
    shape = reduce_feature(_array(model_output.shape).copy())
    n = texture.shape[0]
    alpha = draw_alpha(rng, n, fusion)
    image = synthesize(texture, shape, alpha)
    if original is not None and _array(original).shape[1] == 3:
        image = luminance_merge(image, original)
    indices = list(range(n)) if source_index is None else list(source_index)
    logger.debug("synthesized %d images (%s fusion)", n, fusion.value)
    return SynthesizedImage(image=image, source_index=indices, alpha=[float(a) for a in alpha])
