# coding: utf-8

from __future__ import annotations

from pydantic import Field, model_validator
from typing import Any, ClassVar, List, Optional, Set
from typing_extensions import Self

from synmatch.models.base import SynMatchModel


class LossReport(SynMatchModel):
    """
    LossReport - the loss components of one training step.

    `total` is the differentiable objective; the float fields are its logged values.
    """ # noqa: E501
    l_s: float = Field(ge=0.0)
    l_org: float = Field(default=0.0, ge=0.0)
    l_syn: float = Field(default=0.0, ge=0.0)
    l_total: float = Field(ge=0.0)
    masked_fraction: float = Field(default=0.0, ge=0.0, le=1.0, description="Fraction of unlabeled pixels passing tau.")
    total: Optional[Any] = Field(default=None, exclude=True)
    __properties: ClassVar[List[str]] = ["l_s", "l_org", "l_syn", "l_total", "masked_fraction"]

    _excluded_fields: ClassVar[Set[str]] = {"total"}

    model_config = {
        "arbitrary_types_allowed": True,
        "populate_by_name": True,
        "protected_namespaces": (),
    }

    @model_validator(mode="after")
    def _total_is_sum(self) -> Self:
        if abs(self.l_total - (self.l_s + self.l_org + self.l_syn)) > 1e-6 * max(1.0, abs(self.l_total)):
            raise ValueError("l_total must equal l_s + l_org + l_syn")
        return self
