import json
import math

import numpy as np
import pytest

from mmnn import (SIGNED, Activation, BinaryMask, DimensionMismatchError,
                  NegativeEntryError, NetworkSpec, Neuron, SimilarityConfig,
                  activate, coincidence, network_forward, network_from_dict,
                  network_to_dict, neuron_forward, or_combine)
from mmnn.network import forward_rows, load_network, save_network

SIG = SimilarityConfig(1.0, SIGNED)


def single_neuron_net(weights, sim=SIG, act=Activation.linear()):
    return NetworkSpec([[Neuron(weights, sim, act)]], input_dim=len(weights))


# ---------------------------------------------------------------------------
# Activations
# ---------------------------------------------------------------------------

def test_activation_examples():
    assert activate(0.0, Activation.sigmoid(2000.0)) == 0.5
    assert activate(-0.3, Activation.linear()) == -0.3
    assert activate(0.01, Activation.sigmoid(2000.0)) == pytest.approx(1.0, abs=1e-8)


def test_relu():
    act = Activation.relu()
    assert activate(-1.2, act) == 0.0
    assert activate(0.7, act) == 0.7


def test_sigmoid_is_stable_at_extreme_gain():
    act = Activation.sigmoid(5000.0)
    assert activate(-1.0, act) == 0.0
    assert activate(1.0, act) == 1.0


def test_sigmoid_monotone_and_point_symmetric():
    act = Activation.sigmoid(3.0, offset=0.25)
    zs = np.linspace(-2, 2, 41)
    ys = [activate(z, act) for z in zs]
    assert all(a < b for a, b in zip(ys, ys[1:]))
    for z in zs:
        assert activate(z, act) + activate(-2 * 0.25 - z, act) == pytest.approx(
            1.0, abs=1e-12)


def test_activation_validation():
    with pytest.raises(ValueError):
        Activation.sigmoid(0.0)
    with pytest.raises(ValueError):
        Activation("softmax")


# ---------------------------------------------------------------------------
# Neurons
# ---------------------------------------------------------------------------

def test_neuron_rejects_all_zero_weights():
    with pytest.raises(ValueError):
        Neuron([0.0, 0.0], SIG)


def test_neuron_rejects_negative_weights_in_nonneg_mode():
    with pytest.raises(NegativeEntryError):
        Neuron([0.5, -0.5], SimilarityConfig(1.0, "nonnegative"))


def test_neuron_forward_examples():
    n = Neuron([0.4, 0.6], SIG)
    assert neuron_forward([0.4, 0.6], n) == 1.0

    n2 = Neuron([1.0, -1.0], SIG)
    assert neuron_forward([0.8, 0.1], n2) == pytest.approx(0.35)

    n3 = Neuron([0.4, 0.6], SIG, Activation.sigmoid(2000.0))
    assert neuron_forward([0.4, 0.6], n3) == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# Network topology and forward pass
# ---------------------------------------------------------------------------

def test_topology_validated_at_construction():
    l1 = [Neuron([1.0, 0.0, 0.5], SIG), Neuron([0.2, 0.1, 0.0], SIG)]
    bad_l2 = [Neuron([1.0, -1.0, 0.3], SIG)]  # expects 3 inputs, layer 1 gives 2
    with pytest.raises(ValueError):
        NetworkSpec([l1, bad_l2], input_dim=3)
    with pytest.raises(ValueError):
        NetworkSpec([l1], input_dim=4)
    with pytest.raises(ValueError):
        NetworkSpec([], input_dim=3)


def test_single_layer_identity():
    net = single_neuron_net([0.3, 0.4])
    assert network_forward([0.3, 0.4], net) == [1.0]


def test_two_layer_forward_matches_hand_arithmetic():
    # layer-1 outputs (0.8, 0.1) fed into a signed neuron with weights (1, -1)
    l1 = [Neuron([0.8, 0.8], SIG), Neuron([0.1, 0.1], SIG)]
    l2 = [Neuron([1.0, -1.0], SIG)]
    net = NetworkSpec([l1, l2], input_dim=2)
    out = network_forward([0.8, 0.8], net)
    y1 = [neuron_forward([0.8, 0.8], n) for n in l1]
    assert y1 == [1.0, 0.125]
    assert out == [coincidence(y1, [1.0, -1.0], SIG)]


def test_three_layer_chain_propagates_similarity():
    chain = NetworkSpec([[Neuron([1.0], SIG)]] * 3, input_dim=1)
    for c in (0.2, 0.55, 1.0):
        assert network_forward([c], chain) == [pytest.approx(c)]


def test_output_width_is_k():
    l1 = [Neuron([0.5, 0.2], SIG)] * 3
    l2 = [Neuron([1.0, 0.2, 0.1], SIG), Neuron([0.3, -0.2, 0.5], SIG)]
    net = NetworkSpec([l1, l2], input_dim=2)
    assert net.output_dim == 2
    assert len(network_forward([0.1, 0.9], net)) == 2


def test_forward_is_deterministic():
    rng = np.random.default_rng(0)
    l1 = [Neuron(rng.uniform(-1, 1, 5), SIG) for _ in range(3)]
    l2 = [Neuron(rng.uniform(-1, 1, 3), SIG, Activation.sigmoid(50.0))]
    net = NetworkSpec([l1, l2], input_dim=5)
    x = rng.uniform(-1, 1, 5)
    assert network_forward(x, net) == network_forward(x.copy(), net)


def test_signed_linear_values_stay_in_range():
    rng = np.random.default_rng(1)
    l1 = [Neuron(rng.uniform(-1, 1, 4), SIG) for _ in range(3)]
    l2 = [Neuron(rng.uniform(-1, 1, 3), SIG)]
    net = NetworkSpec([l1, l2], input_dim=4)
    for _ in range(200):
        out, _ = forward_rows(rng.uniform(-1, 1, (1, 4)), net)
        assert -1.0 <= out[0, 0] <= 1.0


def test_nonneg_layer_rejects_negative_inputs():
    net = single_neuron_net([0.5, 0.5], SimilarityConfig(1.0, "nonnegative"))
    with pytest.raises(NegativeEntryError):
        network_forward([0.5, -0.5], net)


def test_zero_hidden_vector_substitutes_zero_output():
    # layer 1 emits exactly 0 when input is orthogonal-signed to its weights
    l1 = [Neuron([1.0, -1.0], SIG)]
    l2 = [Neuron([1.0], SIG, Activation.sigmoid(10.0))]
    net = NetworkSpec([l1, l2], input_dim=2)
    out, events = forward_rows(np.array([[0.5, 0.5]]), net)
    # signed coincidence of (0.5, 0.5) vs (1, -1) is 0 -> hidden vector (0.0,)
    assert out[0, 0] == 0.0
    assert events == 1
    # a healthy row is unaffected
    out2, events2 = forward_rows(np.array([[0.9, 0.1]]), net)
    assert events2 == 0 and out2[0, 0] != 0.0


def test_batch_matches_scalar_rows():
    rng = np.random.default_rng(2)
    l1 = [Neuron(rng.uniform(-1, 1, 6), SimilarityConfig(5.0, SIGNED))
          for _ in range(2)]
    l2 = [Neuron(rng.uniform(-1, 1, 2), SIG, Activation.sigmoid(20.0))]
    net = NetworkSpec([l1, l2], input_dim=6)
    rows = rng.uniform(-1, 1, (40, 6))
    out, _ = forward_rows(rows, net)
    for k in range(rows.shape[0]):
        assert network_forward(rows[k], net) == [out[k, 0]]


# ---------------------------------------------------------------------------
# OR combination
# ---------------------------------------------------------------------------

def test_or_combine():
    a = BinaryMask(np.array([[True, False], [False, False]]))
    b = BinaryMask(np.array([[False, False], [False, True]]))
    assert or_combine([a]) == a
    assert or_combine([a, a.complement()]).bits.all()
    combined = or_combine([a, b])
    assert combined.bits.tolist() == [[True, False], [False, True]]
    with pytest.raises(DimensionMismatchError):
        or_combine([a, BinaryMask(np.zeros((3, 3), dtype=bool))])


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def test_json_roundtrip_is_lossless(tmp_path):
    rng = np.random.default_rng(3)
    l1 = [Neuron(rng.uniform(-1, 1, 7), SimilarityConfig(3.0, SIGNED),
                 role="prototype", class_label="leaf"),
          Neuron(rng.uniform(-1, 1, 7), SimilarityConfig(3.0, SIGNED),
                 role="counter")]
    l2 = [Neuron(np.array([1 / 3, -math.pi / 7]), SIG,
                 Activation.sigmoid(2000.0, -0.125))]
    net = NetworkSpec([l1, l2], input_dim=7)
    path = tmp_path / "net.json"
    save_network(net, path)
    back = load_network(path)
    assert back.input_dim == net.input_dim
    for la, lb in zip(net.layers, back.layers):
        for na, nb in zip(la, lb):
            assert (na.weights == nb.weights).all()
            assert na.similarity == nb.similarity
            assert na.activation == nb.activation
            assert (na.role, na.class_label) == (nb.role, nb.class_label)


def test_json_wire_format():
    net = single_neuron_net([0.25, -0.5], SimilarityConfig(5.0, SIGNED),
                            Activation.sigmoid(2000.0))
    doc = network_to_dict(net)
    assert doc["input_dim"] == 2
    entry = doc["layers"][0][0]
    assert entry["weights"] == [0.25, -0.5]
    assert entry["d"] == 5.0
    assert entry["mode"] == "signed"
    assert entry["activation"] == {"kind": "sigmoid", "a": 2000.0, "b": 0.0}
    # document is valid JSON and reparses to the same network
    again = network_from_dict(json.loads(json.dumps(doc)))
    assert (again.layers[0][0].weights == net.layers[0][0].weights).all()
