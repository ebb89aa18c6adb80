# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class LabelKind(str, Enum):
    """
    Kind of annotation attached to a sample.
    """

    """
    allowed enum values
    """
    DENSE = 'dense'
    SCRIBBLE = 'scribble'
    NONE = 'none'

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of LabelKind from a JSON string"""
        return cls(json.loads(json_str))
