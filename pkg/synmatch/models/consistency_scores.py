# coding: utf-8

from __future__ import annotations

from pydantic import Field
from typing import ClassVar, List

from synmatch.models.base import SynMatchModel


class ConsistencyScores(SynMatchModel):
    """
    ConsistencyScores - semantic consistency of synthesized-image predictions, pseudo labels and ground truth.
    """ # noqa: E501
    dice_syn_pseudo: float = Field(ge=0.0, le=1.0, description="Mean foreground Dice between predictions on synthesized images and pseudo labels.")
    dice_pseudo_gt: float = Field(ge=0.0, le=1.0, description="Mean foreground Dice between pseudo labels and ground truth.")
    __properties: ClassVar[List[str]] = ["dice_syn_pseudo", "dice_pseudo_gt"]
