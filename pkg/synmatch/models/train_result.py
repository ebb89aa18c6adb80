# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictInt
from typing import ClassVar, List, Optional

from synmatch.models.base import SynMatchModel
from synmatch.models.metrics_row import MetricsRow


class TrainResult(SynMatchModel):
    """
    TrainResult - where a training run left its artifacts and how it scored.
    """ # noqa: E501
    out_dir: str
    best_checkpoint: Optional[str] = None
    last_checkpoint: str
    best_epoch: StrictInt = Field(default=0, ge=0)
    best_mean_dsc: float = Field(default=0.0, ge=0.0, le=1.0)
    history: List[MetricsRow] = Field(default_factory=list, description="One validation row per epoch.")
    __properties: ClassVar[List[str]] = ["out_dir", "best_checkpoint", "last_checkpoint", "best_epoch", "best_mean_dsc", "history"]
