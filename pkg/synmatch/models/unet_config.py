# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictInt, model_validator
from typing import ClassVar, List, Literal
from typing_extensions import Self

from synmatch.exceptions import ShapeMismatchError
from synmatch.models.base import SynMatchModel


class UNetConfig(SynMatchModel):
    """
    UNetConfig - width, depth and normalization of the segmentation backbone.
    """ # noqa: E501
    in_channels: StrictInt = Field(default=1, ge=1, description="Image channels (1 grayscale, 3 RGB).")
    num_classes: StrictInt = Field(default=3, ge=2, description="Number of segmentation classes including background.")
    base_channels: StrictInt = Field(default=16, ge=1, description="Channels of the first encoder block and of both feature taps.")
    depth: StrictInt = Field(default=4, ge=2, le=6, description="Number of resolution levels; inputs must be divisible by 2^(depth-1).")
    norm_groups: StrictInt = Field(default=4, ge=1, description="Group-normalization groups per layer.")
    upsample: Literal["bilinear", "nearest"] = Field(default="bilinear", description="Decoder upsampling before the up-convolution.")
    __properties: ClassVar[List[str]] = ["in_channels", "num_classes", "base_channels", "depth", "norm_groups", "upsample"]

    @model_validator(mode="after")
    def _groups_divide_channels(self) -> Self:
        if self.base_channels % self.norm_groups:
            raise ValueError("base_channels ({0}) must be divisible by norm_groups ({1})".format(
                self.base_channels, self.norm_groups))
        return self

    @property
    def divisor(self) -> int:
        return 2 ** (self.depth - 1)

    def level_channels(self) -> List[int]:
        return [self.base_channels * 2 ** level for level in range(self.depth)]

    def check_input(self, height: int, width: int) -> None:
        """Raise ShapeMismatchError unless H and W are multiples of 2^(depth-1)."""
        for axis, size in ((2, height), (3, width)):
            if size % self.divisor:
                raise ShapeMismatchError(
                    "spatial size must be divisible by {0}".format(self.divisor),
                    ["forward_with_taps", "x", axis], expected="multiple of {0}".format(self.divisor), actual=size)
