"""End-to-end segmentation runs: config, thresholding, artifacts on disk.

A run either loads a pre-trained network or builds one from annotated points
(prototype layer) plus an architecture description (trainable head), trains on
a subsampled copy of the image, segments at full resolution, and writes raw
outputs, masks, metrics, the serialized network, and trajectory CSVs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, ParseError
from .image import (BinaryMask, FeatureConfig, Image, load_image, load_mask,
                    read_points_csv, save_gray_pgm, save_mask_pgm,
                    save_mask_png, save_raw_f32, subsample, subsample_point)
from .multiset import SIGNED, SimilarityConfig
from .network import (Activation, NetworkSpec, Neuron, load_network,
                      save_network)
from .training import (ConfusionCounts, TrainConfig, balanced_accuracy,
                       confusion, multi_start_train, prototype_init,
                       scan_outputs)


@dataclass
class SegmentationResult:
    """Raw per-pixel outputs, the thresholded mask, and run diagnostics."""

    raw: np.ndarray
    mask: BinaryMask
    threshold: float
    counts: ConfusionCounts | None = None
    ba: float | None = None
    zero_vector_events: int = 0
    elapsed_seconds: float = 0.0

    def attach_gold(self, gold: BinaryMask) -> None:
        self.counts = confusion(self.mask, gold)
        self.ba = balanced_accuracy(self.counts)


def segment_image(img: Image, net: NetworkSpec, fcfg: FeatureConfig,
                  threshold: float) -> SegmentationResult:
    """Scan every pixel through the network; mask is ``raw >= threshold``."""
    if net.output_dim != 1:
        raise ValueError("segmentation requires a single-output network")
    t0 = time.perf_counter()
    raw, zero_events = scan_outputs(net, img, fcfg)
    mask = BinaryMask(raw >= threshold)
    return SegmentationResult(raw=raw, mask=mask, threshold=threshold,
                              zero_vector_events=zero_events,
                              elapsed_seconds=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Architecture descriptions for the trainable head above the prototype layer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LayerSpec:
    """One trainable layer: neuron count, strictness, activation, optional
    explicit initial weights (one list per neuron)."""

    size: int
    strictness: float = 1.0
    activation: Activation = Activation.linear()
    weights: tuple | None = None


@dataclass(frozen=True)
class ArchSpec:
    """Network recipe: prototype-layer settings plus the trainable head.

    ``radius`` and ``sort`` describe the feature neighborhood the network was
    designed for; ``threshold`` is the default output threshold.
    """

    first_strictness: float = 5.0
    first_activation: Activation = Activation.linear()
    mode: str = SIGNED
    head: tuple = ()
    radius: int = 3
    sort: bool = True
    threshold: float = 0.5

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(self.radius, self.sort)


def default_arch(first_strictness: float = 5.0, head_gain: float = 20.0,
                 head_offset: float = 0.0, radius: int = 3,
                 threshold: float = 0.5) -> ArchSpec:
    """Two-layer recipe: prototype layer feeding one sigmoid output neuron."""
    return ArchSpec(
        first_strictness=first_strictness,
        head=(LayerSpec(1, 1.0, Activation.sigmoid(head_gain, head_offset)),),
        radius=radius,
        threshold=threshold,
    )


def _activation_from_dict(doc) -> Activation:
    if doc is None:
        return Activation.linear()
    return Activation(doc.get("kind", "linear"), float(doc.get("a", 1.0)),
                      float(doc.get("b", 0.0)))


def load_arch(path) -> ArchSpec:
    """Parse an architecture JSON file.

    Schema: ``{"mode": "signed", "first_layer": {"d": 5.0, "activation": ...},
    "layers": [{"size": 1, "d": 1.0, "activation": {"kind": "sigmoid",
    "a": 20.0, "b": 0.0}, "weights": [[...], ...]?}, ...]}``.
    """
    try:
        with open(path) as f:
            doc = json.load(f)
        first = doc.get("first_layer", {})
        head = []
        for entry in doc.get("layers", []):
            weights = entry.get("weights")
            head.append(LayerSpec(
                size=int(entry["size"]),
                strictness=float(entry.get("d", 1.0)),
                activation=_activation_from_dict(entry.get("activation")),
                weights=None if weights is None else tuple(
                    tuple(float(v) for v in row) for row in weights),
            ))
        return ArchSpec(
            first_strictness=float(first.get("d", 5.0)),
            first_activation=_activation_from_dict(first.get("activation")),
            mode=doc.get("mode", SIGNED),
            head=tuple(head),
            radius=int(doc.get("radius", 3)),
            sort=bool(doc.get("sort", True)),
            threshold=float(doc.get("threshold", 0.5)),
        )
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid architecture JSON in {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad architecture document {path}: {exc}") from exc


def build_network(img: Image, points, fcfg: FeatureConfig,
                  arch: ArchSpec) -> NetworkSpec:
    """Prototype layer from annotated points, then the trainable head.

    Head neurons without explicit initial weights start at all-ones (training
    replaces them).
    """
    sim_first = SimilarityConfig(arch.first_strictness, arch.mode)
    layers = [prototype_init(img, points, fcfg, sim_first, arch.first_activation)]
    prev = len(layers[0])
    for spec in arch.head:
        sim = SimilarityConfig(spec.strictness, arch.mode)
        if spec.weights is not None:
            if len(spec.weights) != spec.size:
                raise ParseError(
                    f"layer declares {spec.size} neurons but {len(spec.weights)} "
                    "weight rows")
            neurons = [Neuron(np.array(w, dtype=np.float64), sim, spec.activation)
                       for w in spec.weights]
        else:
            neurons = [Neuron(np.ones(prev), sim, spec.activation)
                       for _ in range(spec.size)]
        layers.append(neurons)
        prev = spec.size
    return NetworkSpec(layers, input_dim=fcfg.feature_length(img.channels))


def train_from_points(img: Image, gold: BinaryMask, points,
                      fcfg: FeatureConfig, arch: ArchSpec, tcfg: TrainConfig,
                      subsample_factor: int = 10):
    """Build a network from annotations and train its head on the subsampled pair.

    Returns ``(net, trajectories)``; the network's prototype weights come from
    the subsampled training image, matching the domain the objective sees.
    """
    if (gold.height, gold.width) != (img.height, img.width):
        raise DimensionMismatchError("gold mask does not match image dimensions")
    small_img = subsample(img, subsample_factor)
    small_gold = subsample(gold, subsample_factor)
    small_points = [subsample_point(p, subsample_factor) for p in points]
    net = build_network(small_img, small_points, fcfg, arch)
    return multi_start_train(net, small_img, small_gold, fcfg, tcfg)


# ---------------------------------------------------------------------------
# File-level experiment runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PipelineConfig:
    """Everything one experiment needs; paths are resolved at run time."""

    image_path: str
    out_dir: str = "out"
    gold_path: str | None = None
    points_path: str | None = None
    network_path: str | None = None
    arch_path: str | None = None
    radius: int = 3
    sort_features: bool = True
    threshold: float = 0.5
    subsample_factor: int = 10
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if not (0.0 <= self.threshold <= 1.0):
            raise ValueError("threshold must lie in [0, 1]")
        if self.subsample_factor < 1:
            raise ValueError("subsample factor must be >= 1")


@dataclass
class ExperimentOutput:
    result: SegmentationResult
    net: NetworkSpec
    trajectories: list


def run_experiment(cfg: PipelineConfig) -> ExperimentOutput:
    """Load inputs, build or train the network, segment, write artifacts."""
    img = load_image(cfg.image_path)
    gold = load_mask(cfg.gold_path) if cfg.gold_path else None
    if gold is not None and (gold.height, gold.width) != (img.height, img.width):
        raise DimensionMismatchError("gold mask does not match image dimensions")
    fcfg = FeatureConfig(cfg.radius, cfg.sort_features)

    trajectories = []
    if cfg.network_path:
        net = load_network(cfg.network_path)
    else:
        if not cfg.points_path:
            raise ValueError("training needs --points (no pre-trained network given)")
        if gold is None:
            raise ValueError("training needs a gold mask")
        points = read_points_csv(cfg.points_path)
        arch = load_arch(cfg.arch_path) if cfg.arch_path else default_arch()
        net, trajectories = train_from_points(img, gold, points, fcfg, arch,
                                              cfg.train, cfg.subsample_factor)

    result = segment_image(img, net, fcfg, cfg.threshold)
    if gold is not None:
        result.attach_gold(gold)

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_raw_f32(result.raw, out / "raw.f32")
    save_gray_pgm(result.raw, out / "raw_preview.pgm")
    save_mask_pgm(result.mask, out / "mask.pgm")
    save_mask_png(result.mask, out / "mask.png")
    save_network(net, out / "network.json")
    for i, traj in enumerate(trajectories):
        traj.to_csv(out / f"trajectory_{i:02d}.csv")
    metrics = {
        "threshold": cfg.threshold,
        "zero_vector_events": result.zero_vector_events,
        "elapsed_seconds": result.elapsed_seconds,
    }
    if result.ba is not None:
        metrics["balanced_accuracy"] = result.ba
        metrics["confusion"] = {"tp": result.counts.tp, "fp": result.counts.fp,
                                "tn": result.counts.tn, "fn": result.counts.fn}
    with open(out / "metrics.json", "w") as f:
        json.dump(metrics, f, indent=1)
    return ExperimentOutput(result=result, net=net, trajectories=trajectories)
