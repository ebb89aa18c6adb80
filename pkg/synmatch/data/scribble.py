# coding: utf-8

"""
    SynMatch

    Scribble annotations derived from dense label maps by morphological
    skeletonization and random pruning, balanced per image into a coverage
    band.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import List

import numpy as np
from scipy import ndimage
from skimage.morphology import skeletonize

logger = logging.getLogger(__name__)

IGNORE_INDEX = 255
KEEP_MIN = 0.3
KEEP_MAX = 0.7
MIN_GUARANTEED_REGION = 9
COVERAGE_MIN = 0.005
COVERAGE_MAX = 0.05


class _ClassScribble:
    """Scribble of one class: a window over its ordered skeleton plus interior pixels by depth."""

    def __init__(self, cls: int, ordered: np.ndarray, start: int, stop: int,
                 interior: np.ndarray, floor: int) -> None:
        self.cls = cls
        self.ordered = ordered
        self.start = start
        self.stop = stop
        self.interior = interior
        self.extra = 0
        self.floor = floor

    def count(self) -> int:
        return self.stop - self.start + self.extra

    def points(self) -> np.ndarray:
        return np.concatenate([self.ordered[self.start:self.stop], self.interior[:self.extra]])

    def grow(self) -> bool:
        if self.stop < len(self.ordered):
            self.stop += 1
        elif self.start > 0:
            self.start -= 1
        elif self.extra < len(self.interior):
            self.extra += 1
        else:
            return False
        return True

    def shrink(self) -> bool:
        if self.count() <= self.floor:
            return False
        if self.extra:
            self.extra -= 1
        elif (self.stop - self.start) % 2:
            self.start += 1
        else:
            self.stop -= 1
        return True


def _class_scribble(
    dense: np.ndarray,
    cls: int,
    rng: np.random.Generator,
    keep_min: float,
    keep_max: float,
) -> _ClassScribble:
    region = dense == cls
    area = int(region.sum())
    skeleton = skeletonize(region)
    depth = ndimage.distance_transform_edt(region)
    points = np.argwhere(skeleton)
    inner = region & ~skeleton
    interior = np.argwhere(inner)
    interior = interior[np.argsort(-depth[inner], kind="stable")]
    if len(points) == 0 and area >= MIN_GUARANTEED_REGION:
        points, interior = interior[:1], interior[1:]
    floor = 1 if area >= MIN_GUARANTEED_REGION and len(points) else 0
    if len(points) == 0:
        return _ClassScribble(cls, points.reshape(0, 2), 0, 0, interior, floor)
    # a contiguous run along a random direction
    theta = rng.uniform(0.0, np.pi)
    ordered = points[np.argsort(points @ np.array([np.cos(theta), np.sin(theta)]), kind="stable")]
    keep = max(floor, min(len(ordered), int(round(rng.uniform(keep_min, keep_max) * len(ordered)))))
    start = int(rng.integers(0, len(ordered) - keep + 1))
    return _ClassScribble(cls, ordered, start, start + keep, interior, floor)


def _balance(scribbles: List[_ClassScribble], low: int, high: int) -> None:
    """Shrink the largest or grow the smallest class scribble until the total lies in [low, high]."""
    while sum(s.count() for s in scribbles) > high:
        candidates = [s for s in scribbles if s.count() > s.floor]
        if not candidates:
            break
        max(candidates, key=lambda s: s.count()).shrink()
    while sum(s.count() for s in scribbles) < low:
        for s in sorted(scribbles, key=lambda s: s.count()):
            if s.grow():
                break
        else:
            break


def derive_scribbles(
    dense: np.ndarray,
    rng: np.random.Generator,
    ignore_index: int = IGNORE_INDEX,
    keep_min: float = KEEP_MIN,
    keep_max: float = KEEP_MAX,
    coverage_min: float = COVERAGE_MIN,
    coverage_max: float = COVERAGE_MAX,
) -> np.ndarray:
    """Scribble map of `dense`: per class, 30-70% of its skeleton; everything else `ignore_index`.

    The per-image total is then pulled into [coverage_min, coverage_max] of
    the pixels: the largest class scribbles are shortened, or the smallest
    ones extended along their skeleton and then into the region interior.
    Every class whose region has at least 9 pixels keeps at least one
    scribble pixel; when the skeleton is empty the deepest interior pixel
    is used.
    """
    dense = np.asarray(dense)
    scribble = np.full(dense.shape, ignore_index, dtype=np.uint8)
    scribbles = [_class_scribble(dense, int(cls), rng, keep_min, keep_max) for cls in np.unique(dense)]
    low = int(np.ceil(coverage_min * dense.size))
    high = max(low, int(np.floor(coverage_max * dense.size)))
    _balance(scribbles, low, high)
    for s in scribbles:
        kept = s.points()
        if len(kept):
            scribble[kept[:, 0], kept[:, 1]] = s.cls
    total = sum(s.count() for s in scribbles)
    if not low <= total <= high:
        logger.debug("scribble coverage %d of %d pixels outside [%d, %d]", total, dense.size, low, high)
    return scribble


def scribble_coverage(scribble: np.ndarray, ignore_index: int = IGNORE_INDEX) -> float:
    return float((np.asarray(scribble) != ignore_index).mean())
