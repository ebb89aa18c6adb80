# coding: utf-8

from __future__ import annotations

import numpy as np

from pydantic import Field, model_validator
from typing import Any, ClassVar, List, Set
from typing_extensions import Self

from synmatch.models.base import SynMatchModel


class PseudoLabelBatch(SynMatchModel):
    """
    PseudoLabelBatch - hard pseudo labels and max-softmax confidences of a weak view, computed without gradient.
    """ # noqa: E501
    labels: Any = Field(description="int64 array [N, H, W], argmax class.")
    confidence: Any = Field(description="float array [N, H, W], max softmax probability.")
    __properties: ClassVar[List[str]] = ["labels", "confidence"]

    _excluded_fields: ClassVar[Set[str]] = {"labels", "confidence"}

    model_config = {
        "arbitrary_types_allowed": True,
        "protected_namespaces": (),
    }

    @model_validator(mode="after")
    def _congruent(self) -> Self:
        if np.shape(self.labels) != np.shape(self.confidence):
            raise ValueError("labels and confidence must share [N, H, W]")
        return self

    def masked_fraction(self, tau: float) -> float:
        """Fraction of pixels whose confidence reaches tau."""
        conf = np.asarray(self.confidence)
        if conf.size == 0:
            return 0.0
        return float((conf >= tau).mean())
