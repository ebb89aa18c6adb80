# coding: utf-8

from __future__ import annotations

from pydantic import Field, model_validator
from typing import Any, ClassVar, List, Set
from typing_extensions import Self

from synmatch.models.base import SynMatchModel


class TappedOutput(SynMatchModel):
    """
    TappedOutput - segmentation logits plus the texture and shape feature taps of one forward pass.
    """ # noqa: E501
    logits: Any = Field(description="Tensor[N, num_classes, H, W]")
    texture: Any = Field(description="Tensor[N, base_channels, H, W], output of the first encoder block.")
    shape: Any = Field(description="Tensor[N, base_channels, H, W], input of the segmentation head.")
    __properties: ClassVar[List[str]] = ["logits", "texture", "shape"]

    _excluded_fields: ClassVar[Set[str]] = {"logits", "texture", "shape"}

    model_config = {
        "arbitrary_types_allowed": True,
        "protected_namespaces": (),
    }

    @model_validator(mode="after")
    def _share_n_h_w(self) -> Self:
        n, _, h, w = self.logits.shape
        for tap in (self.texture, self.shape):
            if (tap.shape[0], tap.shape[2], tap.shape[3]) != (n, h, w):
                raise ValueError("taps must share N, H, W with the logits")
        return self
