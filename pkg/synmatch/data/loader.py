# coding: utf-8

"""
    SynMatch

    In-memory sample cache, seeded random streams and batch view preparation.
"""  # noqa: E501

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from synmatch.augment import strong_view, weak_view
from synmatch.data.formats import read_image, read_label, resolve
from synmatch.exceptions import ConfigError
from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.augmentation_record import AugmentationRecord
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.sample import Sample

logger = logging.getLogger(__name__)

# stream ids of SeedSequence([seed, epoch, step, stream_id, ...])
BATCH_STREAM = 0
LABELED_AUG_STREAM = 1
UNLABELED_AUG_STREAM = 2
SYNTHESIS_STREAM = 3
MIX_STREAM = 4
MEASURE_STREAM = 5


def stream_rng(seed: int, epoch: int, step: int, stream_id: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, epoch, step, stream_id, *extra]))


class SampleStore:
    """Lazily loaded images, training labels and ground truths of one manifest."""

    def __init__(self, manifest: DatasetManifest) -> None:
        self.manifest = manifest
        self.index: Dict[str, Sample] = manifest.by_id()
        self._images: Dict[str, np.ndarray] = {}
        self._labels: Dict[str, np.ndarray] = {}
        self._truths: Dict[str, np.ndarray] = {}

    def image(self, sample_id: str) -> np.ndarray:
        if sample_id not in self._images:
            image = read_image(resolve(self.manifest, self.index[sample_id].image_path))
            if image.shape[0] != self.manifest.in_channels:
                raise ConfigError("image has {0} channels, manifest says {1}".format(
                    image.shape[0], self.manifest.in_channels), ["samples", sample_id])
            self._images[sample_id] = image
        return self._images[sample_id]

    def label(self, sample_id: str) -> np.ndarray:
        """The training label the split exposes (dense or scribble)."""
        sample = self.index[sample_id]
        if sample.label_path is None:
            raise ConfigError("sample has no training label", ["samples", sample_id])
        if sample_id not in self._labels:
            self._labels[sample_id] = read_label(resolve(self.manifest, sample.label_path))
        return self._labels[sample_id]

    def ground_truth(self, sample_id: str) -> np.ndarray:
        """Dense map for measurement; never fed to a loss for unlabeled samples."""
        sample = self.index[sample_id]
        if sample.gt_path is None:
            raise ConfigError("sample has no ground truth", ["samples", sample_id])
        if sample_id not in self._truths:
            self._truths[sample_id] = read_label(resolve(self.manifest, sample.gt_path))
        return self._truths[sample_id]

    def images(self, ids: Sequence[str]) -> np.ndarray:
        return np.stack([self.image(i) for i in ids])

    def labels(self, ids: Sequence[str]) -> np.ndarray:
        return np.stack([self.label(i) for i in ids])

    def ground_truths(self, ids: Sequence[str]) -> np.ndarray:
        return np.stack([self.ground_truth(i) for i in ids])


def sample_batch(rng: np.random.Generator, pool_size: int, batch_size: int) -> np.ndarray:
    """Positions into a pool; with replacement only when the pool is smaller than the batch."""
    if pool_size <= 0:
        return np.zeros(0, dtype=np.int64)
    return rng.choice(pool_size, size=batch_size, replace=pool_size < batch_size)


class Views(NamedTuple):
    weak: np.ndarray
    weak_records: List[AugmentationRecord]
    strong: np.ndarray
    strong_records: List[AugmentationRecord]


def _item_views(x: np.ndarray, seed: Sequence[int], config: AugmentationConfig):
    weak, weak_record = weak_view(x, list(seed) + [0], config)
    strong, strong_record = strong_view(x, weak_record, list(seed) + [1], config)
    return weak, weak_record, strong, strong_record


def prepare_views(
    images: np.ndarray,
    seed: int,
    epoch: int,
    step: int,
    stream_id: int,
    config: Optional[AugmentationConfig] = None,
    threads: int = 1,
) -> Views:
    """Weak and strong (unmixed) views of a batch.

    Item i draws from SeedSequence([seed, epoch, step, stream_id, i, view]),
    so results do not depend on `threads`.
    """
    config = config or AugmentationConfig()
    seeds = [[seed, epoch, step, stream_id, i] for i in range(images.shape[0])]
    if threads > 1 and images.shape[0] > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            items = list(pool.map(lambda args: _item_views(args[0], args[1], config), zip(images, seeds)))
    else:
        items = [_item_views(x, s, config) for x, s in zip(images, seeds)]
    weak, weak_records, strong, strong_records = zip(*items)
    return Views(np.stack(weak), list(weak_records), np.stack(strong), list(strong_records))
