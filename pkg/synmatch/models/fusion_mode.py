# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class FusionMode(str, Enum):
    """
    Which tapped features feed image synthesis.
    """

    """
    allowed enum values
    """
    TEXTURE = 'texture'
    SHAPE = 'shape'
    WEIGHTED = 'weighted'

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of FusionMode from a JSON string"""
        return cls(json.loads(json_str))
