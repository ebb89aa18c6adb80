# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictStr
from typing import Any, ClassVar, Dict, List

from synmatch.models.base import SynMatchModel
from synmatch.models.fusion_mode import FusionMode


class StudyRow(SynMatchModel):
    """
    StudyRow - test-split outcome of one run of an ablation or fusion study.
    """ # noqa: E501
    run: StrictStr
    use_l_org: bool
    use_l_syn: bool
    fusion: FusionMode = Field(default=FusionMode.WEIGHTED)
    mean_dsc: float = Field(ge=0.0, le=1.0)
    mean_asd: float = Field(ge=0.0)
    split_ids_hash: StrictStr = Field(description="Digest of the labeled/unlabeled ids the run trained on.")
    __properties: ClassVar[List[str]] = ["run", "use_l_org", "use_l_syn", "fusion", "mean_dsc", "mean_asd", "split_ids_hash"]

    ABLATION_HEADER: ClassVar[List[str]] = ["run", "use_l_org", "use_l_syn", "mean_dsc", "mean_asd", "split_ids_hash"]
    FUSION_HEADER: ClassVar[List[str]] = ["fusion", "mean_dsc", "mean_asd"]

    def to_ablation_row(self) -> Dict[str, Any]:
        return {
            "run": self.run,
            "use_l_org": int(self.use_l_org),
            "use_l_syn": int(self.use_l_syn),
            "mean_dsc": "{0:.6f}".format(self.mean_dsc),
            "mean_asd": "{0:.6f}".format(self.mean_asd),
            "split_ids_hash": self.split_ids_hash,
        }

    def to_fusion_row(self) -> Dict[str, Any]:
        return {
            "fusion": self.fusion.value,
            "mean_dsc": "{0:.6f}".format(self.mean_dsc),
            "mean_asd": "{0:.6f}".format(self.mean_asd),
        }
