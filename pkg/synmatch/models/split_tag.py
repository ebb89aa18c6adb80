# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class SplitTag(str, Enum):
    """
    Which part of a dataset a metrics row describes.
    """

    """
    allowed enum values
    """
    VAL = 'val'
    TEST = 'test'
    UNLABELED = 'unlabeled'
    TRAIN = 'train'

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of SplitTag from a JSON string"""
        return cls(json.loads(json_str))
