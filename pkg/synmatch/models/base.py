# coding: utf-8

"""
    SynMatch

    Shared serialization surface of the value models.
"""  # noqa: E501


from __future__ import annotations
import pprint
import json

from pydantic import BaseModel, ConfigDict, ValidationError
from typing import Any, ClassVar, Dict, Optional, Set
from typing_extensions import Self

from synmatch.exceptions import ConfigError


class SynMatchModel(BaseModel):
    """
    SynMatchModel - base of every pydantic record in the package.
    """ # noqa: E501

    model_config = ConfigDict(
        populate_by_name=True,
        validate_assignment=True,
        protected_namespaces=(),
    )

    # fields left out of to_dict (array payloads, live tensors)
    _excluded_fields: ClassVar[Set[str]] = set()

    def to_str(self) -> str:
        """Returns the string representation of the model using alias"""
        return pprint.pformat(self.model_dump(by_alias=True, exclude=self._excluded_fields))

    def to_json(self) -> str:
        """Returns the JSON representation of the model using alias"""
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, json_str: str) -> Optional[Self]:
        """Create an instance from a JSON string"""
        return cls.from_dict(json.loads(json_str))

    def to_dict(self) -> Dict[str, Any]:
        """Return the dictionary representation of the model using alias.

        `None` values are dropped and enums are written as their values.
        """
        return self.model_dump(
            by_alias=True,
            exclude=self._excluded_fields,
            exclude_none=True,
            mode="json",
        )

    @classmethod
    def from_dict(cls, obj: Optional[Dict[str, Any]]) -> Optional[Self]:
        """Create an instance from a dict, raising ConfigError on invalid input"""
        if obj is None:
            return None
        try:
            return cls.model_validate(obj)
        except ValidationError as exc:
            first = exc.errors()[0]
            path = [cls.__name__] + [p for p in first.get("loc", ())]
            raise ConfigError(first.get("msg", str(exc)), path) from exc
