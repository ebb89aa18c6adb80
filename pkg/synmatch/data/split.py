# coding: utf-8

"""
    SynMatch

    SSL / WSL / BSL split construction.
"""  # noqa: E501

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from synmatch.exceptions import ConfigError
from synmatch.models.dataset_manifest import DatasetManifest, DatasetSplit
from synmatch.models.label_kind import LabelKind
from synmatch.models.sample import Sample
from synmatch.models.setting import Setting

logger = logging.getLogger(__name__)

VAL_FRACTION = 0.1
TEST_FRACTION = 0.1
# stream ids keep held-out sets independent of setting and fraction
_HOLDOUT_STREAM = 11
_LABELED_STREAM = 12


def labeled_count(n_train: int, fraction: float) -> int:
    """round(fraction * n_train), at least one."""
    return max(1, int(np.floor(fraction * n_train + 0.5)))


def _stratified_order(samples: Sequence[Sample], rng: np.random.Generator) -> List[str]:
    """Shuffle within each dominant class, then interleave the classes round-robin."""
    groups: Dict[int, List[str]] = defaultdict(list)
    for sample in samples:
        groups[sample.dominant_class or 0].append(sample.id)
    queues = []
    for key in sorted(groups):
        ids = sorted(groups[key])
        queues.append([ids[i] for i in rng.permutation(len(ids))])
    order: List[str] = []
    while any(queues):
        for queue in queues:
            if queue:
                order.append(queue.pop(0))
    return order


def holdout(samples: Sequence[Sample], seed: int, val_fraction: float = VAL_FRACTION,
            test_fraction: float = TEST_FRACTION) -> Tuple[List[str], List[str], List[str]]:
    """(train, val, test) ids; 250 samples give 200 / 25 / 25."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, _HOLDOUT_STREAM]))
    order = _stratified_order(samples, rng)
    n_val = int(np.floor(val_fraction * len(order) + 0.5))
    n_test = int(np.floor(test_fraction * len(order) + 0.5))
    val = sorted(order[:n_val])
    test = sorted(order[n_val:n_val + n_test])
    train = sorted(order[n_val + n_test:])
    return train, val, test


def build_split(manifest: DatasetManifest, setting: Setting, labeled_fraction: float, seed: int) -> DatasetManifest:
    """Assign labeled / unlabeled / val / test roles and the label kind each role exposes.

    SSL labels the selected subset densely. WSL scribbles every training
    sample. BSL scribbles the selected subset and strips the rest.
    Validation and test samples expose dense labels for evaluation.
    """
    setting = Setting(setting)
    if not 0.0 < labeled_fraction <= 1.0:
        raise ConfigError("labeled_fraction must lie in (0, 1]", ["split", "fraction"])
    if setting == Setting.WSL and labeled_fraction != 1.0:
        raise ConfigError("wsl requires labeled_fraction = 1", ["split", "fraction"])

    train, val, test = holdout(manifest.samples, seed)
    if not train:
        raise ConfigError("no training samples left after the val/test holdout", ["split"])
    index = manifest.by_id()
    rng = np.random.default_rng(np.random.SeedSequence([seed, _LABELED_STREAM]))
    order = _stratified_order([index[i] for i in train], rng)
    n_labeled = labeled_count(len(train), labeled_fraction)
    labeled = sorted(order[:n_labeled])
    unlabeled = sorted(order[n_labeled:])

    labeled_kind = LabelKind.DENSE if setting == Setting.SSL else LabelKind.SCRIBBLE
    kinds = {i: labeled_kind for i in labeled}
    kinds.update({i: LabelKind.NONE for i in unlabeled})
    kinds.update({i: LabelKind.DENSE for i in val + test})
    try:
        samples = [s.with_label(kinds[s.id]) if s.id in kinds else s.with_label(LabelKind.NONE)
                   for s in manifest.samples]
    except ValueError as exc:
        raise ConfigError(str(exc), ["split", "samples"]) from exc

    data = manifest.model_dump(mode="json")
    data.update({
        "samples": [s.model_dump(mode="json") for s in samples],
        "split": DatasetSplit(labeled=labeled, unlabeled=unlabeled, val=val, test=test).model_dump(mode="json"),
        "setting": setting.value,
        "labeled_fraction": labeled_fraction,
        "seed": seed,
    })
    result = DatasetManifest.from_dict(data)
    assert result is not None
    result.set_root(manifest.root)
    logger.info("%s split with fraction %.3f: %d labeled, %d unlabeled, %d val, %d test",
                setting.value, labeled_fraction, len(labeled), len(unlabeled), len(val), len(test))
    return result
