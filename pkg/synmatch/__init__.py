# coding: utf-8

# flake8: noqa

"""
    SynMatch

    Semi-, weakly- and barely-supervised medical-style image segmentation on
    a small numpy autodiff engine, with images synthesized from the
    segmentation network's own texture and shape features.
"""  # noqa: E501


__version__ = "1.0.0"

# Define package exports
__all__ = [
    "Configuration",
    "SynMatchException",
    "ShapeMismatchError",
    "CheckpointMismatchError",
    "NonFiniteError",
    "ConfigError",
    "FormatError",
    "TruncatedFileError",
    "GradientError",
    "LabelRangeError",
    "Tensor",
    "backward",
    "no_grad",
    "UNetModel",
    "init_model",
    "AdamW",
    "AugmentationConfig",
    "AugmentationRecord",
    "ConsistencyScores",
    "DatasetManifest",
    "DatasetSplit",
    "FusionMode",
    "LabelKind",
    "LossReport",
    "MetricsRow",
    "MixMode",
    "PseudoLabelBatch",
    "Sample",
    "Setting",
    "SplitTag",
    "StudyRow",
    "SynthesizedImage",
    "TappedOutput",
    "TrainConfig",
    "TrainResult",
    "UNetConfig",
]

# import core
from synmatch.configuration import Configuration
from synmatch.exceptions import SynMatchException
from synmatch.exceptions import ShapeMismatchError
from synmatch.exceptions import CheckpointMismatchError
from synmatch.exceptions import NonFiniteError
from synmatch.exceptions import ConfigError
from synmatch.exceptions import FormatError
from synmatch.exceptions import TruncatedFileError
from synmatch.exceptions import GradientError
from synmatch.exceptions import LabelRangeError
from synmatch.tensor import Tensor
from synmatch.tensor import backward
from synmatch.tensor import no_grad
from synmatch.unet import UNetModel
from synmatch.unet import init_model
from synmatch.optim import AdamW

# import models into package
from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.augmentation_record import AugmentationRecord
from synmatch.models.consistency_scores import ConsistencyScores
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.dataset_manifest import DatasetSplit
from synmatch.models.fusion_mode import FusionMode
from synmatch.models.label_kind import LabelKind
from synmatch.models.loss_report import LossReport
from synmatch.models.metrics_row import MetricsRow
from synmatch.models.mix_mode import MixMode
from synmatch.models.pseudo_label_batch import PseudoLabelBatch
from synmatch.models.sample import Sample
from synmatch.models.setting import Setting
from synmatch.models.split_tag import SplitTag
from synmatch.models.study_row import StudyRow
from synmatch.models.synthesized_image import SynthesizedImage
from synmatch.models.tapped_output import TappedOutput
from synmatch.models.train_config import TrainConfig
from synmatch.models.train_result import TrainResult
from synmatch.models.unet_config import UNetConfig
