# coding: utf-8

"""
    SynMatch

    Supervised and confidence-masked pseudo-supervised losses.

    Dense labels are supervised with the equal-weight mean of pixel-mean
    cross-entropy and (1 - soft Dice over foreground classes). Scribbles are
    supervised with cross-entropy over annotated pixels only. Pseudo labels
    enter the same CE + Dice objective restricted to pixels whose confidence
    reaches tau; excluded pixels leave both the Dice numerator and the Dice
    denominator.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from synmatch import functional as F
from synmatch.exceptions import ConfigError, LabelRangeError, ShapeMismatchError
from synmatch.models.label_kind import LabelKind
from synmatch.models.loss_report import LossReport
from synmatch.models.pseudo_label_batch import PseudoLabelBatch
from synmatch.models.tapped_output import TappedOutput
from synmatch.tensor import Tensor, no_grad
from synmatch.unet import UNetModel

logger = logging.getLogger(__name__)

IGNORE_INDEX = 255
DICE_SMOOTH = 1e-5


def _zero() -> Tensor:
    return Tensor(np.zeros(()))


def _check_target(logits: Tensor, y: np.ndarray, op: str) -> None:
    if logits.ndim != 4:
        raise ShapeMismatchError("logits must be [N, C, H, W]", [op, "logits"], expected=4, actual=logits.ndim)
    n, _, h, w = logits.shape
    if tuple(y.shape) != (n, h, w):
        raise ShapeMismatchError("target must be [N, H, W] matching the logits", [op, "target"],
                                 expected=(n, h, w), actual=tuple(y.shape))


def one_hot(y: np.ndarray, num_classes: int, valid: Optional[np.ndarray] = None) -> np.ndarray:
    """[N, H, W] class map -> [N, C, H, W]; rows of invalid pixels are all zero."""
    safe = np.where(valid, y, 0) if valid is not None else y
    out = (safe[:, None, :, :] == np.arange(num_classes)[None, :, None, None]).astype(np.float64)
    if valid is not None:
        out *= valid[:, None, :, :]
    return out


def masked_ce_dice(logits: Tensor, y: np.ndarray, weight: np.ndarray) -> Tensor:
    """CE + soft Dice over the pixels where `weight` is 1; zero when no pixel is selected."""
    n, c, h, w = logits.shape
    weight = weight.astype(np.float64)
    count = float(weight.sum())
    if count == 0.0:
        return _zero()
    target = one_hot(y, c, weight > 0)
    w4 = weight[:, None, :, :]

    ce = -(F.log_softmax_channels(logits) * target).sum() * (1.0 / count)

    probs = F.softmax_channels(logits) * w4
    inter = (probs * target).sum(axis=(0, 2, 3))
    denom = probs.sum(axis=(0, 2, 3)) + target.sum(axis=(0, 2, 3))
    dice = (inter * 2.0 + DICE_SMOOTH) / (denom + DICE_SMOOTH)
    foreground = np.ones(c)
    foreground[0] = 0.0
    dice_loss = 1.0 - (dice * foreground).sum() * (1.0 / (c - 1))
    return (ce + dice_loss) * 0.5


def ce_dice_loss(logits: Tensor, y: np.ndarray) -> Tensor:
    """Equal-weight mean of pixel-mean CE and (1 - mean foreground soft Dice) against a dense map."""
    y = np.asarray(y)
    _check_target(logits, y, "ce_dice_loss")
    c = logits.shape[1]
    bad = np.unique(y[(y < 0) | (y >= c)])
    if bad.size:
        raise LabelRangeError("dense labels must lie in [0, {0})".format(c), ["ce_dice_loss", "y"],
                              values=[int(v) for v in bad])
    return masked_ce_dice(logits, y, np.ones(y.shape))


def partial_ce_loss(logits: Tensor, scribble: np.ndarray, ignore_index: int = IGNORE_INDEX) -> Tensor:
    """Cross-entropy averaged over annotated pixels; zero when nothing is annotated."""
    scribble = np.asarray(scribble)
    _check_target(logits, scribble, "partial_ce_loss")
    c = logits.shape[1]
    valid = (scribble != ignore_index) & (scribble >= 0) & (scribble < c)
    count = int(valid.sum())
    if count == 0:
        return _zero()
    target = one_hot(scribble, c, valid)
    return -(F.log_softmax_channels(logits) * target).sum() * (1.0 / count)


def supervised_loss(logits: Tensor, y: np.ndarray, kind: LabelKind, ignore_index: int = IGNORE_INDEX) -> Tensor:
    if kind == LabelKind.DENSE:
        return ce_dice_loss(logits, y)
    if kind == LabelKind.SCRIBBLE:
        return partial_ce_loss(logits, y, ignore_index)
    raise ConfigError("no supervised loss for unlabeled samples", ["supervised_loss", "kind"])


def pseudo_label_with_taps(model: UNetModel, weak_batch: np.ndarray) -> Tuple[PseudoLabelBatch, TappedOutput]:
    """Forward the weak views without recording, keeping the taps for synthesis."""
    with no_grad():
        taps = model.forward_with_taps(Tensor(weak_batch))
    probs = F.softmax_numpy(taps.logits.data)
    labels = probs.argmax(axis=1).astype(np.int64)
    confidence = probs.max(axis=1)
    return PseudoLabelBatch(labels=labels, confidence=confidence), taps


def pseudo_label(model: UNetModel, weak_batch: np.ndarray) -> PseudoLabelBatch:
    """Argmax labels and max-softmax confidences of the weak views, without gradient."""
    return pseudo_label_with_taps(model, weak_batch)[0]


def unsup_loss(
    strong_logits: Optional[Tensor],
    synth_logits: Optional[Tensor],
    plb: PseudoLabelBatch,
    tau: float,
    strong_targets: Optional[PseudoLabelBatch] = None,
) -> Tuple[Optional[Tensor], Optional[Tensor]]:
    """Confidence-masked CE + Dice of strong views and synthesized images against pseudo labels.

    Synthesized images are pixel-aligned with `plb`. Strong views use
    `strong_targets` when batch mixing rearranged the targets, else `plb`.
    A term whose logits are None is skipped and returned as None.
    """
    l_org = None
    l_syn = None
    if strong_logits is not None:
        target = strong_targets if strong_targets is not None else plb
        labels = np.asarray(target.labels)
        _check_target(strong_logits, labels, "unsup_loss")
        l_org = masked_ce_dice(strong_logits, labels, np.asarray(target.confidence) >= tau)
    if synth_logits is not None:
        labels = np.asarray(plb.labels)
        _check_target(synth_logits, labels, "unsup_loss")
        l_syn = masked_ce_dice(synth_logits, labels, np.asarray(plb.confidence) >= tau)
    return l_org, l_syn


def total_loss(
    l_s: Tensor,
    l_org: Optional[Tensor] = None,
    l_syn: Optional[Tensor] = None,
    masked_fraction: float = 0.0,
) -> LossReport:
    """L = L_s + L_org + L_syn with unit weights; absent terms count as zero."""
    total = l_s
    # rounding can push a near-perfect Dice term a hair below zero
    values = [max(0.0, l_s.item()), 0.0, 0.0]
    for position, term in ((1, l_org), (2, l_syn)):
        if term is not None:
            total = total + term
            values[position] = max(0.0, term.item())
    return LossReport(
        l_s=values[0],
        l_org=values[1],
        l_syn=values[2],
        l_total=values[0] + values[1] + values[2],
        masked_fraction=masked_fraction,
        total=total,
    )
