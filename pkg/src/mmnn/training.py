"""Objectives, finite-difference gradients, and multi-start gradient-ascent training.

Two objectives are available for a single-output network scanned over an
annotated image: the object-minus-background output sum (smooth-ish, the
default for gradient steps) and the balanced accuracy of the thresholded scan
(the reporting metric).  Training runs independent gradient-ascent trajectories
from several random starts and installs the best final weights.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGoldError, DimensionMismatchError, OutOfBoundsError
from .image import (BinaryMask, FeatureConfig, Image, extract_features,
                    extract_features_grid)
from .multiset import SimilarityConfig
from .network import Activation, NetworkSpec, Neuron, forward_rows

OBJECTIVE_A = "a"
OBJECTIVE_BA = "ba"


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(pred: BinaryMask, gold: BinaryMask) -> ConfusionCounts:
    """Per-pixel confusion counts with gold=True as the positive class."""
    if pred.bits.shape != gold.bits.shape:
        raise DimensionMismatchError(
            f"mask dimensions differ: {pred.bits.shape} vs {gold.bits.shape}")
    p = pred.bits
    g = gold.bits
    return ConfusionCounts(tp=int((p & g).sum()), fp=int((p & ~g).sum()),
                           tn=int((~p & ~g).sum()), fn=int((~p & g).sum()))


def balanced_accuracy(c: ConfusionCounts) -> float:
    """Mean of sensitivity and specificity."""
    if c.tp + c.fn == 0 or c.tn + c.fp == 0:
        raise DegenerateGoldError("gold mask contains only one class")
    return 0.5 * c.tp / (c.tp + c.fn) + 0.5 * c.tn / (c.tn + c.fp)


@dataclass(frozen=True)
class TrainConfig:
    """Multi-start gradient-ascent settings.

    ``trainable_layers`` selects which layers' weights are free (0-based);
    ``None`` means every layer after the first.  ``step_rule`` "normalized"
    takes fixed-length steps of ``step_size`` along the gradient direction;
    "raw" uses the plain ``step_size * gradient`` update.
    """

    num_starts: int = 10
    max_steps: int = 30
    fd_resolution: float = 0.01
    step_size: float = 0.05
    stop_threshold: float = 1e-6
    objective: str = OBJECTIVE_A
    ba_threshold: float = 0.5
    seed: int = 0
    step_rule: str = "normalized"
    trainable_layers: tuple | None = None

    def __post_init__(self):
        if self.num_starts < 1:
            raise ValueError("num_starts must be >= 1")
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if not (self.fd_resolution > 0):
            raise ValueError("fd_resolution must be > 0")
        if not (self.step_size > 0):
            raise ValueError("step_size must be > 0")
        if self.stop_threshold < 0:
            raise ValueError("stop_threshold must be >= 0")
        if self.objective not in (OBJECTIVE_A, OBJECTIVE_BA):
            raise ValueError(f"objective must be 'a' or 'ba', got {self.objective!r}")
        if self.step_rule not in ("normalized", "raw"):
            raise ValueError(f"unknown step_rule {self.step_rule!r}")


class Trajectory:
    """Weight snapshots and objective values along one gradient-ascent run."""

    def __init__(self, weights: np.ndarray, values: np.ndarray):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.values = np.asarray(values, dtype=np.float64)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def final_weights(self) -> np.ndarray:
        return self.weights[-1]

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    def to_csv(self, path) -> None:
        d = self.weights.shape[1]
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["step"] + [f"w_{i}" for i in range(d)] + ["objective"])
            for step in range(len(self)):
                writer.writerow([step] + [repr(v) for v in self.weights[step].tolist()]
                                + [repr(float(self.values[step]))])


# ---------------------------------------------------------------------------
# Weight selection and substitution
# ---------------------------------------------------------------------------

def selector_pairs(net: NetworkSpec, trainable_layers: tuple | None) -> list:
    """Expand a layer selection into ordered (layer, neuron) pairs."""
    if trainable_layers is None:
        trainable_layers = tuple(range(1, net.num_layers))
    layers = sorted(set(trainable_layers))
    for li in layers:
        if not (0 <= li < net.num_layers):
            raise ValueError(f"layer index {li} out of range")
    return [(li, ni) for li in layers for ni in range(len(net.layers[li]))]


def flatten_weights(net: NetworkSpec, pairs) -> np.ndarray:
    return np.concatenate([net.layers[li][ni].weights for li, ni in pairs])


def _split_flat(net: NetworkSpec, pairs, flat: np.ndarray) -> dict:
    overrides = {}
    pos = 0
    for li, ni in pairs:
        d = net.layers[li][ni].input_dim
        overrides[(li, ni)] = flat[pos:pos + d]
        pos += d
    if pos != flat.shape[0]:
        raise ValueError(f"flat weight vector has length {flat.shape[0]}, expected {pos}")
    return overrides


def install_weights(net: NetworkSpec, pairs, flat: np.ndarray) -> NetworkSpec:
    """New NetworkSpec with the selected neurons' weights replaced."""
    overrides = _split_flat(net, pairs, np.asarray(flat, dtype=np.float64))
    layers = []
    for li, layer in enumerate(net.layers):
        rebuilt = []
        for ni, n in enumerate(layer):
            if (li, ni) in overrides:
                rebuilt.append(Neuron(overrides[(li, ni)], n.similarity, n.activation,
                                      role=n.role, class_label=n.class_label))
            else:
                rebuilt.append(n)
        layers.append(rebuilt)
    return NetworkSpec(layers, net.input_dim)


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------

def _check_scan_args(net: NetworkSpec, img: Image, gold: BinaryMask):
    if net.output_dim != 1:
        raise ValueError("objectives require a single-output network")
    if (gold.height, gold.width) != (img.height, img.width):
        raise DimensionMismatchError(
            f"gold mask {gold.bits.shape} does not match image "
            f"{(img.height, img.width)}")


def scan_outputs(net: NetworkSpec, img: Image, fcfg: FeatureConfig):
    """Network output for every pixel, shape (h, w), plus zero-vector event count."""
    if net.output_dim != 1:
        raise ValueError("pixel scans require a single-output network")
    feats = extract_features_grid(img, fcfg)
    out, zero_events = forward_rows(feats, net)
    return out[:, 0].reshape(img.height, img.width), zero_events


def objective_a(net: NetworkSpec, img: Image, gold: BinaryMask,
                fcfg: FeatureConfig) -> float:
    """Sum of outputs over gold-object pixels minus the sum over background."""
    _check_scan_args(net, img, gold)
    raw, _ = scan_outputs(net, img, fcfg)
    flat = raw.reshape(-1)
    g = gold.bits.reshape(-1)
    return math.fsum(flat[g].tolist()) - math.fsum(flat[~g].tolist())


def objective_ba(net: NetworkSpec, img: Image, gold: BinaryMask,
                 fcfg: FeatureConfig, threshold: float) -> float:
    """Balanced accuracy of the scan thresholded at ``threshold`` (inclusive)."""
    _check_scan_args(net, img, gold)
    raw, _ = scan_outputs(net, img, fcfg)
    return balanced_accuracy(confusion(BinaryMask(raw >= threshold), gold))


class ScanObjective:
    """Objective as a function of a flattened trainable weight vector.

    Features, and the outputs of all layers before the first trainable one,
    are computed once and reused for every weight probe.
    """

    def __init__(self, net: NetworkSpec, img: Image, gold: BinaryMask,
                 fcfg: FeatureConfig, pairs, kind: str = OBJECTIVE_A,
                 ba_threshold: float = 0.5):
        _check_scan_args(net, img, gold)
        if not pairs:
            raise ValueError("no trainable weights selected")
        self.net = net
        self.pairs = list(pairs)
        self.kind = kind
        self.ba_threshold = ba_threshold
        self._gold_flat = gold.bits.reshape(-1)
        if kind == OBJECTIVE_BA and (self._gold_flat.all() or not self._gold_flat.any()):
            raise DegenerateGoldError("gold mask contains only one class")
        self._gold_mask = gold
        feats = extract_features_grid(img, fcfg)
        self.first_layer = min(li for li, _ in self.pairs)
        if self.first_layer > 0:
            self._base, self._base_events = forward_rows(
                feats, net, stop_layer=self.first_layer)
        else:
            self._base = feats
            self._base_events = 0
        self._shape = (img.height, img.width)

    @property
    def dim(self) -> int:
        return sum(self.net.layers[li][ni].input_dim for li, ni in self.pairs)

    def raw_outputs(self, flat: np.ndarray):
        overrides = _split_flat(self.net, self.pairs, np.asarray(flat, dtype=np.float64))
        out, events = forward_rows(self._base, self.net, overrides,
                                   start_layer=self.first_layer)
        return out[:, 0], self._base_events + events

    def evaluate(self, flat: np.ndarray):
        """Objective value plus the count of degenerate (all-zero) similarity events."""
        raw, events = self.raw_outputs(flat)
        if self.kind == OBJECTIVE_A:
            g = self._gold_flat
            value = math.fsum(raw[g].tolist()) - math.fsum(raw[~g].tolist())
        else:
            pred = BinaryMask((raw >= self.ba_threshold).reshape(self._shape))
            value = balanced_accuracy(confusion(pred, self._gold_mask))
        return value, events

    def __call__(self, flat: np.ndarray) -> float:
        return self.evaluate(flat)[0]


# ---------------------------------------------------------------------------
# Gradient ascent
# ---------------------------------------------------------------------------

def fd_gradient(objective, w: np.ndarray, delta: float) -> np.ndarray:
    """Central-difference gradient estimate with probe distance ``delta``.

    A probe that lands exactly on the all-zero vector is nudged by ``delta``
    on its first coordinate so the similarity stays defined.
    """
    if not (delta > 0):
        raise ValueError("delta must be > 0")
    w = np.asarray(w, dtype=np.float64)
    grad = np.empty_like(w)
    for i in range(w.shape[0]):
        wp = w.copy()
        wp[i] += delta
        if not wp.any():
            wp[0] += delta
        wm = w.copy()
        wm[i] -= delta
        if not wm.any():
            wm[0] += delta
        grad[i] = (objective(wp) - objective(wm)) / (2.0 * delta)
    return grad


def gradient_ascent(objective, w0: np.ndarray, cfg: TrainConfig) -> Trajectory:
    """Ascend ``objective`` from ``w0``; the trajectory records every accepted point.

    Stops on: step budget, zero gradient, a step that would decrease the
    objective (rejected; the trajectory ends at the pre-step point), or an
    accepted step whose objective change is below ``stop_threshold``.
    """
    w = np.asarray(w0, dtype=np.float64).copy()
    value = float(objective(w))
    weights = [w.copy()]
    values = [value]
    for _ in range(cfg.max_steps):
        grad = fd_gradient(objective, w, cfg.fd_resolution)
        norm = float(np.sqrt(np.sum(grad * grad)))
        if norm == 0.0:
            break
        if cfg.step_rule == "normalized":
            step = (cfg.step_size / norm) * grad
        else:
            step = cfg.step_size * grad
        w_next = w + step
        next_value = float(objective(w_next))
        if next_value < value:
            break
        weights.append(w_next.copy())
        values.append(next_value)
        delta = abs(next_value - value)
        w = w_next
        value = next_value
        if delta < cfg.stop_threshold:
            break
    return Trajectory(np.array(weights), np.array(values))


def multi_start_train(net: NetworkSpec, img: Image, gold: BinaryMask,
                      fcfg: FeatureConfig, cfg: TrainConfig):
    """Train the selected weights from ``num_starts`` random starts in [-1, 1]^d.

    Returns ``(trained_net, trajectories)``; the installed weights are the
    final point of the trajectory with the highest final objective (ties break
    to the lowest start index).
    """
    pairs = selector_pairs(net, cfg.trainable_layers)
    for li, ni in pairs:
        if not net.layers[li][ni].similarity.signed:
            raise ValueError(
                f"trainable neuron (layer {li}, neuron {ni}) must use signed mode: "
                "starts are drawn from [-1, 1]")
    objective = ScanObjective(net, img, gold, fcfg, pairs,
                              kind=cfg.objective, ba_threshold=cfg.ba_threshold)
    rng = np.random.default_rng(cfg.seed)
    starts = rng.uniform(-1.0, 1.0, size=(cfg.num_starts, objective.dim))
    trajectories = [gradient_ascent(objective, start, cfg) for start in starts]
    finals = np.array([t.final_value for t in trajectories])
    best = int(np.argmax(finals))
    trained = install_weights(net, pairs, trajectories[best].final_weights)
    return trained, trajectories


def prototype_init(img: Image, points, fcfg: FeatureConfig,
                   sim: SimilarityConfig,
                   act: Activation = Activation.linear()) -> list:
    """One neuron per annotated point, weights = that point's feature vector."""
    points = list(points)
    if not points:
        raise ValueError("prototype_init needs at least one point")
    neurons = []
    for p in points:
        if not img.contains(p.x, p.y):
            raise OutOfBoundsError(
                f"point ({p.x}, {p.y}) outside {img.width}x{img.height} image")
        neurons.append(Neuron(extract_features(img, p.x, p.y, fcfg), sim, act,
                              role=p.role, class_label=p.class_label))
    return neurons
