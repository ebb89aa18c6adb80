# coding: utf-8

from __future__ import annotations

import hashlib

from pydantic import Field, PrivateAttr, StrictInt, StrictStr, model_validator
from typing import ClassVar, Dict, List, Optional
from typing_extensions import Self

from synmatch.models.base import SynMatchModel
from synmatch.models.label_kind import LabelKind
from synmatch.models.sample import Sample
from synmatch.models.setting import Setting


class DatasetSplit(SynMatchModel):
    """
    DatasetSplit - sample ids of each role.
    """ # noqa: E501
    labeled: List[StrictStr] = Field(default_factory=list)
    unlabeled: List[StrictStr] = Field(default_factory=list)
    val: List[StrictStr] = Field(default_factory=list)
    test: List[StrictStr] = Field(default_factory=list)

    @model_validator(mode="after")
    def _disjoint(self) -> Self:
        seen: Dict[str, str] = {}
        for role in ("labeled", "unlabeled", "val", "test"):
            for sample_id in getattr(self, role):
                if sample_id in seen:
                    raise ValueError("sample {0} is in both {1} and {2}".format(sample_id, seen[sample_id], role))
                seen[sample_id] = role
        return self

    @property
    def train(self) -> List[str]:
        return self.labeled + self.unlabeled

    def ids_hash(self) -> str:
        """Short digest of the labeled/unlabeled assignment (compared across ablation runs)."""
        text = "|".join([",".join(sorted(self.labeled)), ",".join(sorted(self.unlabeled))])
        return hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]


class DatasetManifest(SynMatchModel):
    """
    DatasetManifest - samples, class count and the SSL/WSL/BSL split of a dataset directory.
    """ # noqa: E501
    name: StrictStr = Field(default="synthetic")
    num_classes: StrictInt = Field(ge=2)
    in_channels: StrictInt = Field(default=1, ge=1)
    image_size: StrictInt = Field(ge=1)
    samples: List[Sample] = Field(default_factory=list)
    split: DatasetSplit = Field(default_factory=DatasetSplit)
    setting: Optional[Setting] = Field(default=None, description="None until build_split assigns a regime.")
    labeled_fraction: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    seed: Optional[StrictInt] = None
    ignore_index: StrictInt = Field(default=255, ge=0, le=255, description="Label value of unannotated scribble pixels.")
    __properties: ClassVar[List[str]] = ["name", "num_classes", "in_channels", "image_size", "samples", "split", "setting",
                                         "labeled_fraction", "seed", "ignore_index"]

    _root: Optional[str] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _setting_invariants(self) -> Self:
        index = {s.id: s for s in self.samples}
        if len(index) != len(self.samples):
            raise ValueError("duplicate sample ids")
        for role in ("labeled", "unlabeled", "val", "test"):
            for sample_id in getattr(self.split, role):
                if sample_id not in index:
                    raise ValueError("split {0} names unknown sample {1}".format(role, sample_id))
        if self.setting is None:
            return self
        labeled_kinds = {index[i].label_kind for i in self.split.labeled}
        unlabeled_kinds = {index[i].label_kind for i in self.split.unlabeled}
        if unlabeled_kinds - {LabelKind.NONE}:
            raise ValueError("unlabeled samples must not carry labels")
        if self.setting == Setting.SSL and labeled_kinds - {LabelKind.DENSE}:
            raise ValueError("SSL labeled samples must have dense labels")
        if self.setting in (Setting.WSL, Setting.BSL) and labeled_kinds - {LabelKind.SCRIBBLE}:
            raise ValueError("{0} labeled samples must have scribble labels".format(self.setting.value.upper()))
        if self.setting == Setting.WSL and self.split.unlabeled:
            raise ValueError("WSL has no unlabeled samples")
        if self.setting == Setting.BSL and not self.split.unlabeled:
            raise ValueError("BSL needs unlabeled samples")
        return self

    @property
    def root(self) -> Optional[str]:
        """Directory the manifest was loaded from (paths are relative to it)."""
        return self._root

    def set_root(self, value: Optional[str]) -> None:
        self._root = value

    def by_id(self) -> Dict[str, Sample]:
        return {s.id: s for s in self.samples}

    def samples_for(self, role: str) -> List[Sample]:
        index = self.by_id()
        return [index[i] for i in getattr(self.split, role)]

    def unlabeled_pool(self) -> List[Sample]:
        """Samples that enter the unsupervised branch.

        Scribbled samples count as labeled for supervised learning and as
        unlabeled for pseudo supervision; dense SSL labels do not.
        """
        pool = self.samples_for("unlabeled")
        if self.setting in (Setting.WSL, Setting.BSL):
            pool = self.samples_for("labeled") + pool
        return pool
