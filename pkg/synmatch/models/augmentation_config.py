# coding: utf-8

from __future__ import annotations

from pydantic import Field, model_validator
from typing_extensions import Self

from synmatch.models.base import SynMatchModel
from synmatch.models.mix_mode import MixMode


class AugmentationConfig(SynMatchModel):
    """
    AugmentationConfig - magnitudes and probabilities of the weak and strong views.
    """ # noqa: E501
    crop_scale_min: float = Field(default=0.8, gt=0.0, le=1.0, description="Smallest crop side as a fraction of the image side.")
    crop_scale_max: float = Field(default=1.0, gt=0.0, le=1.0, description="Largest crop side as a fraction of the image side.")
    rotate: bool = Field(default=True, description="Draw a right-angle rotation.")
    flip: bool = Field(default=True, description="Draw horizontal and vertical flips.")
    intensity: bool = Field(default=True, description="Apply brightness/contrast jitter and blur in the strong view.")
    brightness: float = Field(default=0.3, ge=0.0, description="Additive brightness jitter range (+/-).")
    contrast: float = Field(default=0.3, ge=0.0, lt=1.0, description="Multiplicative contrast jitter range (+/-).")
    blur_prob: float = Field(default=0.5, ge=0.0, le=1.0)
    blur_sigma_min: float = Field(default=0.1, gt=0.0)
    blur_sigma_max: float = Field(default=1.5, gt=0.0)
    mix_mode: MixMode = Field(default=MixMode.CUTMIX, description="Mixing operation of the strong view.")
    mix_prob: float = Field(default=0.5, ge=0.0, le=1.0, description="Probability that an item is mixed with a batch partner.")
    cutmix_area_min: float = Field(default=0.1, ge=0.0, le=1.0, description="Smallest CutMix box area as a fraction of the image.")
    cutmix_area_max: float = Field(default=0.5, ge=0.0, le=1.0, description="Largest CutMix box area as a fraction of the image.")
    mixup_alpha: float = Field(default=1.0, gt=0.0, description="Beta(alpha, alpha) parameter of Mixup.")

    @model_validator(mode="after")
    def _ranges_ordered(self) -> Self:
        if self.crop_scale_min > self.crop_scale_max:
            raise ValueError("crop_scale_min must not exceed crop_scale_max")
        if self.blur_sigma_min > self.blur_sigma_max:
            raise ValueError("blur_sigma_min must not exceed blur_sigma_max")
        if self.cutmix_area_min > self.cutmix_area_max:
            raise ValueError("cutmix_area_min must not exceed cutmix_area_max")
        return self
