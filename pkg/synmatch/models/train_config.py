# coding: utf-8

from __future__ import annotations

import json
import os

from pydantic import Field, StrictInt, model_validator
from typing import Any, ClassVar, Dict, List, Mapping, Optional, Tuple
from typing_extensions import Self

from synmatch.exceptions import ConfigError
from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.base import SynMatchModel
from synmatch.models.fusion_mode import FusionMode
from synmatch.models.setting import Setting
from synmatch.models.unet_config import UNetConfig


class TrainConfig(SynMatchModel):
    """
    TrainConfig - one experiment: regime, optimizer, schedule, loss switches, augmentation and backbone.
    """ # noqa: E501
    data_dir: str = Field(default="data/synthetic", description="Dataset directory holding manifest.json.")
    out_dir: str = Field(default="runs/synmatch", description="Directory for checkpoints and CSV logs.")
    setting: Setting = Field(default=Setting.BSL)
    labeled_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    tau: float = Field(default=0.95, gt=0.0, le=1.01, description="Confidence threshold of pseudo supervision.")
    lr: float = Field(default=1e-4, gt=0.0)
    betas: Tuple[float, float] = Field(default=(0.9, 0.999))
    weight_decay: float = Field(default=1e-4, ge=0.0)
    epochs: StrictInt = Field(default=60, ge=1)
    iterations_per_epoch: Optional[StrictInt] = Field(default=None, ge=1, description="None: one pass over the larger of the labeled/unlabeled pools.")
    labeled_batch_size: StrictInt = Field(default=8, ge=1)
    unlabeled_batch_size: StrictInt = Field(default=8, ge=1)
    image_size: StrictInt = Field(default=64, ge=8)
    seed: StrictInt = Field(default=0, description="Seed of batch sampling, augmentation and synthesis streams.")
    model_seed: StrictInt = Field(default=0, description="Seed of parameter initialization.")
    use_l_org: bool = Field(default=True, description="Strong-weak pseudo supervision on unlabeled images.")
    use_l_syn: bool = Field(default=True, description="Pseudo supervision on synthesized images.")
    fusion: FusionMode = Field(default=FusionMode.WEIGHTED)
    augmentation: AugmentationConfig = Field(default_factory=AugmentationConfig)
    model: UNetConfig = Field(default_factory=UNetConfig)
    dump_synth_dir: Optional[str] = Field(default=None, description="Write image/synth/pseudo triplets here every epoch.")
    track_consistency: bool = Field(default=False, description="Measure dice(syn, pseudo) and dice(pseudo, gt) on the unlabeled pool every epoch.")
    dump_predictions: bool = False
    __properties: ClassVar[List[str]] = [
        "data_dir", "out_dir", "setting", "labeled_fraction", "tau", "lr", "betas", "weight_decay",
        "epochs", "iterations_per_epoch", "labeled_batch_size", "unlabeled_batch_size", "image_size",
        "seed", "model_seed", "use_l_org", "use_l_syn", "fusion", "augmentation", "model",
        "dump_synth_dir", "track_consistency", "dump_predictions"]

    @model_validator(mode="after")
    def _regime_invariants(self) -> Self:
        if self.setting == Setting.WSL and self.labeled_fraction != 1.0:
            raise ValueError("wsl requires labeled_fraction = 1")
        if self.image_size % self.model.divisor:
            raise ValueError("image_size {0} is not divisible by 2^(depth-1) = {1}".format(
                self.image_size, self.model.divisor))
        return self

    @property
    def mode_name(self) -> str:
        if self.use_l_org and self.use_l_syn:
            return "synmatch"
        if self.use_l_org:
            return "fixmatch"
        if self.use_l_syn:
            return "syn_only"
        return "supervised"

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Mapping[str, Any]] = None) -> Self:
        """Load a JSON file or a flat `key=value` file.

        Dotted keys address nested models (`model.base_channels=16`).
        `overrides` uses the same dotted keys and wins over file values.
        """
        if not os.path.exists(path):
            raise ConfigError("config file not found: {0}".format(path))
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError("invalid JSON config: {0}".format(exc), [path]) from exc
        else:
            data = parse_key_values(text)
        for key, value in (overrides or {}).items():
            _set_dotted(data, key, value)
        instance = cls.from_dict(data)
        assert instance is not None
        return instance

    def with_overrides(self, **changes: Any) -> Self:
        data = self.model_dump()
        for key, value in changes.items():
            _set_dotted(data, key.replace("__", "."), value)
        instance = type(self).from_dict(data)
        assert instance is not None
        return instance


def parse_key_values(text: str) -> Dict[str, Any]:
    """Parse `key=value` lines; values are JSON literals when they parse, else strings."""
    data: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected key=value on line {0}".format(lineno), ["line", lineno])
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            parsed: Any = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        _set_dotted(data, key, parsed)
    return data


def _set_dotted(data: Dict[str, Any], key: str, value: Any) -> None:
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[parts[-1]] = value
