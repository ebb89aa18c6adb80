# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class MixMode(str, Enum):
    """
    Mixing operation of the strong augmentation.
    """

    """
    allowed enum values
    """
    NONE = 'none'
    CUTMIX = 'cutmix'
    MIXUP = 'mixup'

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of MixMode from a JSON string"""
        return cls(json.loads(json_str))
