# coding: utf-8

from __future__ import annotations
import json
from enum import Enum
from typing_extensions import Self


class DtypeCode(int, Enum):
    """
    Element type code of a STEN1 tensor container.
    """

    """
    allowed enum values
    """
    F32 = 0
    U8 = 1

    @classmethod
    def from_json(cls, json_str: str) -> Self:
        """Create an instance of DtypeCode from a JSON string"""
        return cls(json.loads(json_str))
