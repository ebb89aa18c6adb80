# coding: utf-8

"""
    SynMatch

    Dice similarity, average surface distance and the semantic-consistency
    measurements taken on the unlabeled pool.

    Boundary pixels are class pixels with at least one 4-neighbour outside the
    class; pixels on the image border count as having an outside neighbour.
    ASD averages both directed mean boundary distances. When both maps are
    empty ASD is 0; when exactly one is empty it is the image diagonal.
"""  # noqa: E501

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.spatial.distance import cdist

from synmatch.exceptions import ShapeMismatchError
from synmatch.functional import softmax_numpy
from synmatch.models.consistency_scores import ConsistencyScores
from synmatch.models.fusion_mode import FusionMode
from synmatch.models.metrics_row import MetricsRow
from synmatch.models.split_tag import SplitTag
from synmatch.synthesis import synthesize_batch
from synmatch.tensor import Tensor, no_grad
from synmatch.unet import UNetModel

logger = logging.getLogger(__name__)

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)

EMPTY_NONE = "none"
EMPTY_BOTH = "both"
EMPTY_PRED = "pred"
EMPTY_GT = "gt"


def _check_congruent(pred: np.ndarray, gt: np.ndarray, op: str) -> None:
    if np.shape(pred) != np.shape(gt):
        raise ShapeMismatchError("maps differ in shape", [op, "pred"], expected=np.shape(gt), actual=np.shape(pred))


def dice_score(pred: np.ndarray, gt: np.ndarray, class_id: int) -> float:
    """2|P n G| / (|P| + |G|); 1.0 when both are empty."""
    _check_congruent(pred, gt, "dice_score")
    p = np.asarray(pred) == class_id
    g = np.asarray(gt) == class_id
    total = int(p.sum()) + int(g.sum())
    if total == 0:
        return 1.0
    return 2.0 * int(np.logical_and(p, g).sum()) / total


def boundary(mask: np.ndarray) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    return mask & ~ndimage.binary_erosion(mask, structure=FOUR_CONNECTED, border_value=0)


def surface_distance(pred: np.ndarray, gt: np.ndarray, class_id: int) -> Tuple[float, str]:
    """ASD and which empty-map convention (if any) produced it."""
    _check_congruent(pred, gt, "average_surface_distance")
    p = np.asarray(pred) == class_id
    g = np.asarray(gt) == class_id
    p_any, g_any = bool(p.any()), bool(g.any())
    if not p_any and not g_any:
        return 0.0, EMPTY_BOTH
    if not p_any or not g_any:
        h, w = p.shape[-2:]
        penalty = float(np.sqrt(h * h + w * w))
        logger.info("class %d empty in %s, ASD penalty %.3f used", class_id, "prediction" if not p_any else "ground truth", penalty)
        return penalty, EMPTY_PRED if not p_any else EMPTY_GT
    bp = np.argwhere(boundary(p))
    bg = np.argwhere(boundary(g))
    d = cdist(bp, bg)
    return 0.5 * (float(d.min(axis=1).mean()) + float(d.min(axis=0).mean())), EMPTY_NONE


def average_surface_distance(pred: np.ndarray, gt: np.ndarray, class_id: int) -> float:
    return surface_distance(pred, gt, class_id)[0]


class SampleScores(NamedTuple):
    dsc: List[float]
    asd: List[float]
    empty_pred: int
    empty_gt: int


def score_sample(pred: np.ndarray, gt: np.ndarray, num_classes: int) -> SampleScores:
    dsc: List[float] = []
    asd: List[float] = []
    empty_pred = empty_gt = 0
    for c in range(1, num_classes):
        dsc.append(dice_score(pred, gt, c))
        value, empty = surface_distance(pred, gt, c)
        asd.append(value)
        empty_pred += int(empty == EMPTY_PRED)
        empty_gt += int(empty == EMPTY_GT)
    return SampleScores(dsc, asd, empty_pred, empty_gt)


def score_batch(preds: np.ndarray, gts: np.ndarray, num_classes: int, threads: int = 1) -> List[SampleScores]:
    pairs = list(zip(preds, gts))
    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda pg: score_sample(pg[0], pg[1], num_classes), pairs))
    return [score_sample(p, g, num_classes) for p, g in pairs]


def mean_foreground_dice(pred: np.ndarray, gt: np.ndarray, num_classes: int) -> float:
    return float(np.mean([dice_score(pred, gt, c) for c in range(1, num_classes)]))


def sample_row(epoch: int, split: SplitTag, sample_id: str, scores: SampleScores) -> MetricsRow:
    return MetricsRow(epoch=epoch, split=split, sample_id=sample_id, dsc=scores.dsc, mean_dsc=float(np.mean(scores.dsc)),
                      asd=scores.asd, mean_asd=float(np.mean(scores.asd)),
                      empty_pred=scores.empty_pred, empty_gt=scores.empty_gt)


def aggregate_row(epoch: int, split: SplitTag, scores: Sequence[SampleScores],
                  consistency: Optional[ConsistencyScores] = None) -> MetricsRow:
    """Per-class means over samples; empty-map counts are summed."""
    dsc = np.mean([s.dsc for s in scores], axis=0) if scores else np.zeros(0)
    asd = np.mean([s.asd for s in scores], axis=0) if scores else np.zeros(0)
    return MetricsRow(
        epoch=epoch,
        split=split,
        dsc=[float(v) for v in dsc],
        mean_dsc=float(np.mean(dsc)) if dsc.size else 0.0,
        asd=[float(v) for v in asd],
        mean_asd=float(np.mean(asd)) if asd.size else 0.0,
        dice_syn_pseudo=consistency.dice_syn_pseudo if consistency else None,
        dice_pseudo_gt=consistency.dice_pseudo_gt if consistency else None,
        empty_pred=sum(s.empty_pred for s in scores),
        empty_gt=sum(s.empty_gt for s in scores),
    )


def predict(model: UNetModel, images: np.ndarray, batch_size: int = 16) -> np.ndarray:
    """Argmax class maps [N, H, W] at the input resolution."""
    out = []
    with no_grad():
        for start in range(0, images.shape[0], batch_size):
            logits = model.forward(Tensor(images[start:start + batch_size]))
            out.append(logits.data.argmax(axis=1))
    if not out:
        return np.zeros((0,) + images.shape[2:], dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def consistency_report(
    model: UNetModel,
    images: np.ndarray,
    ground_truth: np.ndarray,
    rng: np.random.Generator,
    fusion: FusionMode = FusionMode.WEIGHTED,
    batch_size: int = 16,
) -> ConsistencyScores:
    """Mean foreground Dice of (synthesized-image prediction, pseudo label) and (pseudo label, ground truth).

    Ground truth is read for measurement only.
    """
    num_classes = model.config.num_classes
    syn_pseudo: List[float] = []
    pseudo_gt: List[float] = []
    with no_grad():
        for start in range(0, images.shape[0], batch_size):
            batch = images[start:start + batch_size]
            taps = model.forward_with_taps(Tensor(batch))
            pseudo = softmax_numpy(taps.logits.data).argmax(axis=1)
            synth = synthesize_batch(taps, rng, fusion, original=batch)
            syn_pred = model.forward(synth.image).data.argmax(axis=1)
            for k in range(batch.shape[0]):
                syn_pseudo.append(mean_foreground_dice(syn_pred[k], pseudo[k], num_classes))
                pseudo_gt.append(mean_foreground_dice(pseudo[k], ground_truth[start + k], num_classes))
    if not syn_pseudo:
        return ConsistencyScores(dice_syn_pseudo=0.0, dice_pseudo_gt=0.0)
    return ConsistencyScores(dice_syn_pseudo=float(np.mean(syn_pseudo)), dice_pseudo_gt=float(np.mean(pseudo_gt)))
