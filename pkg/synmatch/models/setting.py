# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class Setting(str, Enum):
    """
    Sparse-annotation regime of a training set.
    """

    """
    allowed enum values
    """
    SSL = 'ssl'
    WSL = 'wsl'
    BSL = 'bsl'

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of Setting from a JSON string"""
        return cls(json.loads(json_str))
