# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictBool, StrictInt, field_validator, model_validator
from typing import Optional, Tuple
from typing_extensions import Self

from synmatch.models.base import SynMatchModel
from synmatch.models.mix_mode import MixMode


class GeometricParams(SynMatchModel):
    """
    GeometricParams - crop box, right-angle rotation and flips of one view.

    The crop is square, taken at (crop_top, crop_left) with side crop_size and
    resized back to `size` with nearest-neighbour sampling.
    """ # noqa: E501
    size: StrictInt = Field(ge=1, description="Side of the (square) input and output image.")
    crop_top: StrictInt = Field(default=0, ge=0)
    crop_left: StrictInt = Field(default=0, ge=0)
    crop_size: Optional[StrictInt] = Field(default=None, ge=1, description="Crop side; None means full frame.")
    rotation: StrictInt = Field(default=0, description="Counter-clockwise rotation in degrees.")
    flip_h: StrictBool = False
    flip_v: StrictBool = False

    @field_validator("rotation")
    def rotation_validate_enum(cls, value: int) -> int:
        """Validates the enum"""
        if value not in (0, 90, 180, 270):
            raise ValueError("must be one of enum values (0, 90, 180, 270)")
        return value

    @model_validator(mode="after")
    def _crop_inside(self) -> Self:
        side = self.size if self.crop_size is None else self.crop_size
        if self.crop_top + side > self.size or self.crop_left + side > self.size:
            raise ValueError("crop box leaves the image")
        return self

    @property
    def is_full_frame(self) -> bool:
        return self.crop_size is None or self.crop_size == self.size


class IntensityParams(SynMatchModel):
    """
    IntensityParams - pixel intensity transform of a strong view.
    """ # noqa: E501
    brightness: float = Field(default=0.0, description="Additive offset.")
    contrast: float = Field(default=1.0, gt=0.0, description="Gain around the image mean.")
    blur_sigma: Optional[float] = Field(default=None, gt=0.0, description="Gaussian blur sigma; None means no blur.")


class MixParams(SynMatchModel):
    """
    MixParams - batch-partner mixing of a strong view.

    `box` is (top, left, bottom, right), half open, in the output frame.
    """ # noqa: E501
    mode: MixMode
    partner_index: StrictInt = Field(ge=0)
    box: Optional[Tuple[int, int, int, int]] = None
    lam: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Own-image weight of Mixup.")

    @model_validator(mode="after")
    def _payload_matches_mode(self) -> Self:
        if self.mode == MixMode.CUTMIX and self.box is None:
            raise ValueError("cutmix needs a box")
        if self.mode == MixMode.MIXUP and self.lam is None:
            raise ValueError("mixup needs lam")
        if self.box is not None:
            top, left, bottom, right = self.box
            if not (0 <= top <= bottom and 0 <= left <= right):
                raise ValueError("box must be (top, left, bottom, right) with top<=bottom, left<=right")
        return self


class AugmentationRecord(SynMatchModel):
    """
    AugmentationRecord - a replayable weak or strong transform.

    Weak views carry only the geometric part; strong views reuse the weak
    geometry and add intensity and, optionally, mixing.
    """ # noqa: E501
    geometric: GeometricParams
    intensity: Optional[IntensityParams] = None
    mix: Optional[MixParams] = None

    @classmethod
    def identity(cls, size: int) -> "AugmentationRecord":
        return cls(geometric=GeometricParams(size=size))

    @property
    def is_strong(self) -> bool:
        return self.intensity is not None or self.mix is not None
