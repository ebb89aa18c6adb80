# coding: utf-8

from __future__ import annotations

from pydantic import Field, StrictInt, StrictStr, model_validator
from typing import ClassVar, List, Optional
from typing_extensions import Self

from synmatch.models.base import SynMatchModel
from synmatch.models.label_kind import LabelKind


class Sample(SynMatchModel):
    """
    Sample - one image and the annotation the current split exposes for it.

    `label_path` is the training label (dense or scribble) and is absent for
    unlabeled samples. `gt_path` keeps the dense ground truth for evaluation
    and consistency measurement; training never reads it for unlabeled
    samples. Paths are relative to the manifest directory.
    """ # noqa: E501
    id: StrictStr = Field(description="Unique sample identifier.")
    image_path: StrictStr = Field(description="PGM (grayscale) or PPM (RGB) image file.")
    label_kind: LabelKind = Field(default=LabelKind.NONE)
    label_path: Optional[StrictStr] = Field(default=None, description="Training label file; None iff label_kind is none.")
    gt_path: Optional[StrictStr] = Field(default=None, description="Dense ground-truth file used for measurement only.")
    scribble_path: Optional[StrictStr] = Field(default=None, description="Scribble file derived from the dense label.")
    dominant_class: Optional[StrictInt] = Field(default=None, ge=0, description="Largest foreground class, used to stratify splits.")
    __properties: ClassVar[List[str]] = ["id", "image_path", "label_kind", "label_path", "gt_path", "scribble_path", "dominant_class"]

    @model_validator(mode="after")
    def _kind_matches_path(self) -> Self:
        if (self.label_kind == LabelKind.NONE) != (self.label_path is None):
            raise ValueError("label_kind none must coincide with a missing label_path (sample {0})".format(self.id))
        return self

    def with_label(self, kind: LabelKind) -> "Sample":
        """Copy of this sample exposing the requested label kind."""
        if kind == LabelKind.DENSE:
            path = self.gt_path
        elif kind == LabelKind.SCRIBBLE:
            path = self.scribble_path
        else:
            path = None
        if kind != LabelKind.NONE and path is None:
            raise ValueError("sample {0} has no {1} label on disk".format(self.id, kind.value))
        return self.model_copy(update={"label_kind": kind, "label_path": path})
