# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictInt, field_validator
from typing import Any, ClassVar, Dict, List, Optional

from synmatch.models.base import SynMatchModel
from synmatch.models.split_tag import SplitTag


class MetricsRow(SynMatchModel):
    """
    MetricsRow - evaluation outcome of one (epoch, split), or of one sample when `sample_id` is set.

    Per-class lists index foreground classes 1..C-1.
    """ # noqa: E501
    epoch: StrictInt = Field(ge=0)
    split: SplitTag
    sample_id: Optional[str] = Field(default=None, description="None for aggregate rows.")
    dsc: List[float] = Field(default_factory=list, description="Per-class Dice (fraction).")
    mean_dsc: float = Field(default=0.0, ge=0.0, le=1.0)
    asd: List[float] = Field(default_factory=list, description="Per-class average surface distance (pixels).")
    mean_asd: float = Field(default=0.0, ge=0.0)
    dice_syn_pseudo: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    dice_pseudo_gt: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    empty_pred: StrictInt = Field(default=0, ge=0, description="Class maps where only the prediction was empty (ASD penalty used).")
    empty_gt: StrictInt = Field(default=0, ge=0, description="Class maps where only the ground truth was empty (ASD penalty used).")
    __properties: ClassVar[List[str]] = ["epoch", "split", "sample_id", "dsc", "mean_dsc", "asd", "mean_asd", "dice_syn_pseudo", "dice_pseudo_gt", "empty_pred", "empty_gt"]

    @field_validator("dsc")
    def dsc_in_unit_interval(cls, value: List[float]) -> List[float]:
        for v in value:
            if not 0.0 <= v <= 1.0:
                raise ValueError("DSC must lie in [0, 1], got {0}".format(v))
        return value

    @field_validator("asd")
    def asd_nonnegative(cls, value: List[float]) -> List[float]:
        for v in value:
            if v < 0.0:
                raise ValueError("ASD must be >= 0, got {0}".format(v))
        return value

    @staticmethod
    def csv_header(num_classes: int) -> List[str]:
        classes = range(1, num_classes)
        return (["epoch", "split", "sample_id", "mean_dsc", "mean_asd"]
                + ["dsc_{0}".format(c) for c in classes]
                + ["asd_{0}".format(c) for c in classes]
                + ["dice_syn_pseudo", "dice_pseudo_gt", "empty_pred", "empty_gt"])

    def to_csv_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            "epoch": self.epoch,
            "split": self.split.value,
            "sample_id": self.sample_id or "",
            "mean_dsc": "{0:.6f}".format(self.mean_dsc),
            "mean_asd": "{0:.6f}".format(self.mean_asd),
            "dice_syn_pseudo": "" if self.dice_syn_pseudo is None else "{0:.6f}".format(self.dice_syn_pseudo),
            "dice_pseudo_gt": "" if self.dice_pseudo_gt is None else "{0:.6f}".format(self.dice_pseudo_gt),
            "empty_pred": self.empty_pred,
            "empty_gt": self.empty_gt,
        }
        for c, value in enumerate(self.dsc, start=1):
            row["dsc_{0}".format(c)] = "{0:.6f}".format(value)
        for c, value in enumerate(self.asd, start=1):
            row["asd_{0}".format(c)] = "{0:.6f}".format(value)
        return row
