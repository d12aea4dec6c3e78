"""Deterministic synthetic scenes for experiments, demos, and tests.

Real benchmark photographs are not distributable, so the package ships small
generated scenes: colored blobs on a contrasting background with Gaussian
pixel noise, plus ready-made gold masks and annotation points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import COUNTER_PROTOTYPE, PROTOTYPE, AnnotatedPoint, BinaryMask, Image


def _disk(size: int, cx: float, cy: float, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= radius ** 2


def _paint(size: int, regions, background, noise: float, seed: int) -> Image:
    """Fill regions (mask, hsv-color) over a background color, then add noise."""
    data = np.empty((size, size, 3), dtype=np.float64)
    data[:, :] = background
    for mask, color in regions:
        data[mask] = color
    if noise > 0:
        rng = np.random.default_rng(seed)
        data = data + rng.normal(0.0, noise, size=data.shape)
    return Image(np.clip(data, 0.0, 1.0))


@dataclass(frozen=True)
class TwoBlobScene:
    """One object class (two blobs) on a plain background."""

    image: Image
    gold: BinaryMask
    prototype: AnnotatedPoint
    counter: AnnotatedPoint

    @property
    def points(self) -> list:
        return [self.prototype, self.counter]


def two_blob_scene(size: int = 64, noise: float = 0.02, seed: int = 7) -> TwoBlobScene:
    """Two green-ish blobs on a dull blue background, with one prototype and
    one counter-prototype point."""
    blob1 = _disk(size, 0.32 * size, 0.36 * size, 0.15 * size)
    blob2 = _disk(size, 0.66 * size, 0.64 * size, 0.19 * size)
    gold = blob1 | blob2
    img = _paint(size,
                 [(gold, (0.33, 0.72, 0.78))],
                 background=(0.62, 0.45, 0.40),
                 noise=noise, seed=seed)
    return TwoBlobScene(
        image=img,
        gold=BinaryMask(gold),
        prototype=AnnotatedPoint(int(0.32 * size), int(0.36 * size), PROTOTYPE),
        counter=AnnotatedPoint(int(0.85 * size), int(0.12 * size), COUNTER_PROTOTYPE),
    )


@dataclass(frozen=True)
class TwoClassScene:
    """Two object classes plus a distractor blob that belongs to neither."""

    image: Image
    gold_a: BinaryMask
    gold_b: BinaryMask
    gold_joint: BinaryMask
    prototype_a: AnnotatedPoint
    prototype_b: AnnotatedPoint
    counter: AnnotatedPoint


def two_class_scene(size: int = 64, noise: float = 0.02, seed: int = 11,
                    distractor_hue: float = 0.85,
                    distractor_radius: float = 0.22) -> TwoClassScene:
    """Class A (green) and class B (blue) disks, plus a distractor disk of an
    unrelated hue; the distractor is outside every gold mask.

    Single-prototype stage networks thresholded at their sign boundary capture
    any region that is far from the background, distractor included, while a
    jointly trained head over both prototype signals can reject it, so the
    scene separates one-class pipelines from joint training by construction.
    """
    a = _disk(size, 0.28 * size, 0.30 * size, 0.14 * size)
    b = _disk(size, 0.70 * size, 0.30 * size, 0.14 * size)
    dist = _disk(size, 0.34 * size, 0.72 * size, distractor_radius * size)
    img = _paint(size,
                 [(a, (0.33, 0.72, 0.75)),
                  (b, (0.60, 0.72, 0.75)),
                  (dist, (distractor_hue, 0.72, 0.75))],
                 background=(0.08, 0.30, 0.35),
                 noise=noise, seed=seed)
    return TwoClassScene(
        image=img,
        gold_a=BinaryMask(a),
        gold_b=BinaryMask(b),
        gold_joint=BinaryMask(a | b),
        prototype_a=AnnotatedPoint(int(0.28 * size), int(0.30 * size), PROTOTYPE, "a"),
        prototype_b=AnnotatedPoint(int(0.70 * size), int(0.30 * size), PROTOTYPE, "b"),
        counter=AnnotatedPoint(int(0.85 * size), int(0.85 * size), COUNTER_PROTOTYPE),
    )


def random_hsv_image(size: int, seed: int) -> Image:
    """Uniform random pixels in (0.05, 0.95); used by oracle-style tests."""
    rng = np.random.default_rng(seed)
    return Image(rng.uniform(0.05, 0.95, size=(size, size, 3)))
