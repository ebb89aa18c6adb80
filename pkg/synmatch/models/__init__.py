# coding: utf-8

# flake8: noqa
"""
    SynMatch

    Value models of the package.
"""  # noqa: E501


# import models into model package
from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.augmentation_record import AugmentationRecord
from synmatch.models.augmentation_record import GeometricParams
from synmatch.models.augmentation_record import IntensityParams
from synmatch.models.augmentation_record import MixParams
from synmatch.models.consistency_scores import ConsistencyScores
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.dataset_manifest import DatasetSplit
from synmatch.models.dtype_code import DtypeCode
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
