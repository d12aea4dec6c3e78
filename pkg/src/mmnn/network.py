"""Multiset neurons and generic feed-forward multilayer networks.

A neuron scores its input against a stored weight vector with the coincidence
index and passes the result through an activation.  Layer 1 consumes the raw
feature vector; every later layer consumes the previous layer's output vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NegativeEntryError, ParseError
from .image import BinaryMask
from .multiset import (SimilarityConfig, as_feature_vector, coincidence,
                       coincidence_rows)

LINEAR = "linear"
SIGMOID = "sigmoid"
RELU = "relu"


@dataclass(frozen=True)
class Activation:
    """Output non-linearity; sigmoid is ``1 / (1 + exp(-gain * (z + offset)))``."""

    kind: str = LINEAR
    gain: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in (LINEAR, SIGMOID, RELU):
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind == SIGMOID and not (self.gain > 0):
            raise ValueError("sigmoid gain must be > 0")

    @classmethod
    def linear(cls) -> "Activation":
        return cls(LINEAR)

    @classmethod
    def sigmoid(cls, gain: float, offset: float = 0.0) -> "Activation":
        return cls(SIGMOID, gain, offset)

    @classmethod
    def relu(cls) -> "Activation":
        return cls(RELU)


def activate(z: float, act: Activation) -> float:
    """Apply an activation to one pre-activation value."""
    if act.kind == LINEAR:
        return z
    if act.kind == RELU:
        return z if z > 0.0 else 0.0
    t = act.gain * (z + act.offset)
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def _activate_many(values: np.ndarray, act: Activation) -> np.ndarray:
    if act.kind == LINEAR:
        return values.copy()
    if act.kind == RELU:
        return np.maximum(values, 0.0)
    return np.array([activate(v, act) for v in values.tolist()])


class Neuron:
    """One multiset neuron: weights, similarity settings, activation.

    ``role`` and ``class_label`` are optional metadata recorded when the neuron
    was initialized from an annotated point.
    """

    def __init__(self, weights, similarity: SimilarityConfig,
                 activation: Activation = Activation.linear(),
                 role: str | None = None, class_label: str | None = None):
        w = as_feature_vector(weights).copy()
        if not w.any():
            raise ValueError("neuron weights must not be all-zero")
        if not similarity.signed and (w < 0).any():
            raise NegativeEntryError("nonnegative-mode neuron has negative weights")
        w.setflags(write=False)
        self.weights = w
        self.similarity = similarity
        self.activation = activation
        self.role = role
        self.class_label = class_label

    @property
    def input_dim(self) -> int:
        return self.weights.shape[0]


def neuron_forward(input_vector, neuron: Neuron) -> float:
    """Coincidence between input and weights, then the neuron's activation."""
    z = coincidence(input_vector, neuron.weights, neuron.similarity)
    return activate(z, neuron.activation)


class NetworkSpec:
    """Validated feed-forward topology: an ordered list of neuron layers.

    Layer shapes are checked at construction; a forward pass can then never
    see a dimension error.
    """

    def __init__(self, layers, input_dim: int):
        if input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        layers = [list(layer) for layer in layers]
        if not layers or any(not layer for layer in layers):
            raise ValueError("network needs at least one non-empty layer")
        expected = input_dim
        for li, layer in enumerate(layers):
            for ni, neuron in enumerate(layer):
                if neuron.input_dim != expected:
                    raise ValueError(
                        f"layer {li} neuron {ni} expects {neuron.input_dim} inputs, "
                        f"but the previous layer provides {expected}")
            expected = len(layer)
        self.layers = layers
        self.input_dim = input_dim

    @property
    def output_dim(self) -> int:
        return len(self.layers[-1])

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def layer_sizes(self) -> list:
        return [len(layer) for layer in self.layers]


def network_forward(input_vector, net: NetworkSpec) -> list:
    """Outputs of the last layer for one input vector, in neuron order."""
    x = as_feature_vector(input_vector)
    if x.shape[0] != net.input_dim:
        raise DimensionMismatchError(
            f"input length {x.shape[0]} != network input_dim {net.input_dim}")
    out, _ = forward_rows(x[None, :], net)
    return list(out[0])


def forward_rows(rows: np.ndarray, net: NetworkSpec, overrides=None,
                 start_layer: int = 0, stop_layer: int | None = None):
    """Batch forward pass over many input rows.

    ``rows`` is (n, d) where d matches the input of ``start_layer`` (feature
    length for 0, previous layer width otherwise); layers up to but excluding
    ``stop_layer`` are applied.  ``overrides`` optionally maps (layer, neuron)
    to a replacement weight vector, which lets training probe weight
    configurations without rebuilding the network.

    Returns ``(outputs, zero_events)``: outputs is (n, K); ``zero_events``
    counts rows whose intermediate vector became exactly all-zero (their
    downstream outputs are substituted with 0 instead of aborting the scan).
    """
    cur = np.asarray(rows, dtype=np.float64)
    zero_events = 0
    last = net.num_layers if stop_layer is None else stop_layer
    for li in range(start_layer, last):
        layer = net.layers[li]
        if any(not n.similarity.signed for n in layer) and (cur < 0).any():
            raise NegativeEntryError(
                f"layer {li} has nonnegative-mode neurons but sees negative inputs")
        hidden_zero = None
        if li > 0:
            hidden_zero = ~cur.any(axis=1)
        outs = np.empty((cur.shape[0], len(layer)), dtype=np.float64)
        for ni, neuron in enumerate(layer):
            w = neuron.weights
            if overrides is not None and (li, ni) in overrides:
                w = np.asarray(overrides[(li, ni)], dtype=np.float64)
            values, degenerate = coincidence_rows(cur, w, neuron.similarity)
            activated = _activate_many(values, neuron.activation)
            if degenerate.any():
                activated[degenerate] = 0.0
                zero_events += int(degenerate.sum())
            outs[:, ni] = activated
        if hidden_zero is not None and hidden_zero.any():
            outs[hidden_zero, :] = 0.0
            zero_events += int(hidden_zero.sum())
        cur = outs
    return cur, zero_events


def or_combine(masks) -> BinaryMask:
    """Pixel-wise logical OR of one or more equal-sized masks."""
    masks = list(masks)
    if not masks:
        raise ValueError("or_combine needs at least one mask")
    first = masks[0]
    bits = first.bits.copy()
    for m in masks[1:]:
        if m.bits.shape != bits.shape:
            raise DimensionMismatchError(
                f"mask dimensions differ: {m.bits.shape} vs {bits.shape}")
        bits |= m.bits
    return BinaryMask(bits)


# ---------------------------------------------------------------------------
# JSON serialization; floats round-trip losslessly via shortest-repr encoding.
# ---------------------------------------------------------------------------

def network_to_dict(net: NetworkSpec) -> dict:
    layers = []
    for layer in net.layers:
        entries = []
        for n in layer:
            entry = {
                "weights": [float(v) for v in n.weights],
                "d": n.similarity.strictness,
                "mode": n.similarity.mode,
                "activation": {"kind": n.activation.kind,
                               "a": n.activation.gain,
                               "b": n.activation.offset},
            }
            if n.role is not None:
                entry["role"] = n.role
            if n.class_label is not None:
                entry["class"] = n.class_label
            entries.append(entry)
        layers.append(entries)
    return {"input_dim": net.input_dim, "layers": layers}


def network_from_dict(doc: dict) -> NetworkSpec:
    try:
        layers = []
        for layer_doc in doc["layers"]:
            layer = []
            for nd in layer_doc:
                act = nd.get("activation", {"kind": LINEAR, "a": 1.0, "b": 0.0})
                layer.append(Neuron(
                    np.array(nd["weights"], dtype=np.float64),
                    SimilarityConfig(strictness=float(nd["d"]), mode=nd["mode"]),
                    Activation(act["kind"], float(act.get("a", 1.0)),
                               float(act.get("b", 0.0))),
                    role=nd.get("role"),
                    class_label=nd.get("class"),
                ))
            layers.append(layer)
        return NetworkSpec(layers, int(doc["input_dim"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad network document: {exc}") from exc


def save_network(net: NetworkSpec, path) -> None:
    with open(path, "w") as f:
        json.dump(network_to_dict(net), f, indent=1)


def load_network(path) -> NetworkSpec:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid network JSON in {path}: {exc}") from exc
    return network_from_dict(doc)
