# coding: utf-8

from __future__ import annotations

from pydantic import Field, model_validator
from typing import Any, ClassVar, List, Set
from typing_extensions import Self

from synmatch.models.base import SynMatchModel


class SynthesizedImage(SynMatchModel):
    """
    SynthesizedImage - a batch of images synthesized from feature taps, aligned with the pseudo labels of their sources.
    """ # noqa: E501
    image: Any = Field(description="Tensor[N, in_channels, H, W] with values in [0, 1], detached.")
    source_index: List[int] = Field(description="Batch position of the unlabeled source of each item.")
    alpha: List[float] = Field(description="Texture weight used for each item.")
    __properties: ClassVar[List[str]] = ["image", "source_index", "alpha"]

    _excluded_fields: ClassVar[Set[str]] = {"image"}

    model_config = {
        "arbitrary_types_allowed": True,
        "protected_namespaces": (),
    }

    @model_validator(mode="after")
    def _one_alpha_per_item(self) -> Self:
        n = self.image.shape[0]
        if len(self.alpha) != n or len(self.source_index) != n:
            raise ValueError("need one alpha and one source index per item")
        for a in self.alpha:
            if not 0.0 <= a <= 1.0:
                raise ValueError("alpha must lie in [0, 1]")
        return self
