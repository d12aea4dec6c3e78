import numpy as np
import pytest

from mmnn import (NONNEGATIVE, SIGNED, AllZeroOperandsError,
                  LengthMismatchError, NegativeEntryError, SimilarityConfig,
                  as_multiset, coincidence, interiority, jaccard,
                  ms_cardinality, ms_intersection, ms_union, pow_signed)
from mmnn.multiset import coincidence_rows, multiplicity_vector

NONNEG = SimilarityConfig(1.0, NONNEGATIVE)
SIGNED_CFG = SimilarityConfig(1.0, SIGNED)


def random_pair(rng, signed):
    n = int(rng.integers(1, 65))
    lo = -1.0 if signed else 0.0
    x = rng.uniform(lo, 1.0, n)
    y = rng.uniform(lo, 1.0, n)
    # all-zero draws are measure-zero, but guard anyway
    if not x.any():
        x[0] = 0.5
    if not y.any():
        y[0] = 0.5
    return x, y


# ---------------------------------------------------------------------------
# Integer multiset arithmetic
# ---------------------------------------------------------------------------

def test_union_multiplicities_and_cardinality():
    x = {"a": 3, "b": 2}
    y = {"a": 1, "b": 3, "d": 1}
    u = ms_union(x, y)
    assert dict(u) == {"a": 3, "b": 3, "d": 1}
    assert ms_cardinality(x) == 5
    assert ms_cardinality(y) == 5
    assert ms_cardinality(u) == 7


def test_union_identity_and_idempotence():
    assert dict(ms_union({}, {"a": 1})) == {"a": 1}
    assert dict(ms_union({"a": 2}, {"a": 2})) == {"a": 2}


def test_intersection_follows_min_rule():
    # element-wise min gives {a:1, b:2}, cardinality 3
    z = ms_intersection({"a": 3, "b": 2}, {"a": 1, "b": 3, "d": 1})
    assert dict(z) == {"a": 1, "b": 2}
    assert ms_cardinality(z) == 3


def test_intersection_disjoint_and_idempotent():
    assert dict(ms_intersection({"a": 2}, {"b": 2})) == {}
    assert dict(ms_intersection({"a": 2, "c": 1}, {"a": 2, "c": 1})) == {"a": 2, "c": 1}


def test_empty_cardinality():
    assert ms_cardinality({}) == 0


def test_multiset_rejects_bad_multiplicities():
    with pytest.raises(ValueError):
        as_multiset({"a": -1})
    with pytest.raises(ValueError):
        as_multiset({"a": 1.5})
    assert dict(as_multiset({"a": 0, "b": 2})) == {"b": 2}


def test_multiset_ops_agree_with_vector_ops():
    # embedding as multiplicity vectors over the joint support must reproduce
    # the integer-side Jaccard ratio
    rng = np.random.default_rng(42)
    labels = list("abcdefgh")
    for _ in range(200):
        x = {lab: int(m) for lab, m in zip(labels, rng.integers(0, 5, len(labels)))}
        y = {lab: int(m) for lab, m in zip(labels, rng.integers(0, 5, len(labels)))}
        x = {k: v for k, v in x.items() if v}
        y = {k: v for k, v in y.items() if v}
        if not x and not y:
            continue
        support = sorted(set(x) | set(y))
        vx = multiplicity_vector(x, support)
        vy = multiplicity_vector(y, support)
        inter = ms_cardinality(ms_intersection(x, y))
        union = ms_cardinality(ms_union(x, y))
        if not vx.any() or not vy.any():
            continue
        assert jaccard(vx, vy, NONNEG) == inter / union
        assert interiority(vx, vy, NONNEG) == inter / min(ms_cardinality(x),
                                                          ms_cardinality(y))


# ---------------------------------------------------------------------------
# Similarity indices: worked examples
# ---------------------------------------------------------------------------

def test_jaccard_examples():
    assert jaccard([3, 2, 0], [1, 3, 1], NONNEG) == 3 / 7
    assert jaccard([0.4, 0.7], [0.4, 0.7], NONNEG) == 1.0
    assert jaccard([1, -1], [1, 1], SIGNED_CFG) == 0.0


def test_interiority_examples():
    assert interiority([1, 1], [2, 2], NONNEG) == 1.0
    assert interiority([0.3, 0.9], [0.3, 0.9], NONNEG) == 1.0
    assert interiority([3, 2, 0], [1, 3, 1], NONNEG) == 3 / 5


def test_coincidence_examples():
    assert coincidence([0.2, 0.8], [0.2, 0.8], SimilarityConfig(4.2, NONNEGATIVE)) == 1.0
    assert coincidence([1, 1], [2, 2], NONNEG) == 0.5
    assert coincidence([1, 2], [-1, -2], SimilarityConfig(3.0, SIGNED)) == -1.0


def test_pow_signed():
    assert pow_signed(-1.0, 3.0) == -1.0
    assert pow_signed(0.5, 2.0) == 0.25
    assert pow_signed(-0.5, 2.0) == -0.25
    assert pow_signed(0.0, 0.7) == 0.0


# ---------------------------------------------------------------------------
# Error contract
# ---------------------------------------------------------------------------

def test_length_mismatch():
    with pytest.raises(LengthMismatchError):
        jaccard([1, 2], [1, 2, 3], NONNEG)


def test_both_all_zero_is_an_error():
    for fn in (jaccard, interiority, coincidence):
        with pytest.raises(AllZeroOperandsError):
            fn([0.0, 0.0], [0.0, 0.0], SIGNED_CFG)


def test_one_sided_zero_returns_zero():
    assert jaccard([0.0, 0.0], [0.5, 0.1], NONNEG) == 0.0
    assert interiority([0.0, 0.0], [0.5, 0.1], NONNEG) == 0.0
    assert coincidence([0.5, 0.1], [0.0, 0.0], SIGNED_CFG) == 0.0


def test_negative_entries_rejected_in_nonnegative_mode():
    with pytest.raises(NegativeEntryError):
        jaccard([1, -0.1], [1, 1], NONNEG)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        jaccard([1, float("nan")], [1, 1], NONNEG)
    with pytest.raises(ValueError):
        coincidence([1, 1], [1, float("inf")], NONNEG)


def test_config_validation():
    with pytest.raises(ValueError):
        SimilarityConfig(0.0, NONNEGATIVE)
    with pytest.raises(ValueError):
        SimilarityConfig(1.0, "fuzzy")


# ---------------------------------------------------------------------------
# Property suite (also exercised by the acceptance tests)
# ---------------------------------------------------------------------------

def test_commutativity_bit_exact():
    rng = np.random.default_rng(1)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(2.0, mode)
        for _ in range(500):
            x, y = random_pair(rng, mode == SIGNED)
            assert jaccard(x, y, cfg) == jaccard(y, x, cfg)
            assert interiority(x, y, cfg) == interiority(y, x, cfg)
            assert coincidence(x, y, cfg) == coincidence(y, x, cfg)


def test_range_bounds():
    rng = np.random.default_rng(2)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(3.0, mode)
        for _ in range(500):
            x, y = random_pair(rng, mode == SIGNED)
            j = jaccard(x, y, cfg)
            i = interiority(x, y, cfg)
            c = coincidence(x, y, cfg)
            if mode == NONNEGATIVE:
                assert 0.0 <= j <= 1.0 and 0.0 <= c <= 1.0
            else:
                assert -1.0 <= j <= 1.0 and -1.0 <= c <= 1.0
            assert 0.0 <= i <= 1.0


def test_self_similarity_is_exactly_one():
    rng = np.random.default_rng(3)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(5.0, mode)
        for _ in range(200):
            x, _ = random_pair(rng, mode == SIGNED)
            assert jaccard(x, x, cfg) == 1.0
            assert interiority(x, x, cfg) == 1.0
            assert coincidence(x, x, cfg) == 1.0


def test_positive_scale_invariance():
    rng = np.random.default_rng(4)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(2.5, mode)
        for _ in range(300):
            x, y = random_pair(rng, mode == SIGNED)
            alpha = float(rng.uniform(0.1, 10.0))
            assert jaccard(alpha * x, alpha * y, cfg) == pytest.approx(
                jaccard(x, y, cfg), abs=1e-12)
            assert interiority(alpha * x, alpha * y, cfg) == pytest.approx(
                interiority(x, y, cfg), abs=1e-12)
            assert coincidence(alpha * x, alpha * y, cfg) == pytest.approx(
                coincidence(x, y, cfg), abs=1e-12)


def test_ordering_c_le_j_le_i():
    rng = np.random.default_rng(5)
    for d in (1.0, 2.0, 5.0):
        cfg = SimilarityConfig(d, NONNEGATIVE)
        for _ in range(400):
            x, y = random_pair(rng, False)
            j = jaccard(x, y, cfg)
            assert coincidence(x, y, cfg) <= j <= interiority(x, y, cfg)


def test_strictness_monotonicity():
    rng = np.random.default_rng(6)
    checked = 0
    while checked < 300:
        x, y = random_pair(rng, False)
        j = jaccard(x, y, NONNEG)
        if not (1e-6 < j < 1.0 - 1e-6):
            continue
        values = [coincidence(x, y, SimilarityConfig(d, NONNEGATIVE))
                  for d in (1.0, 2.0, 3.5, 7.0)]
        assert all(a > b for a, b in zip(values, values[1:]))
        checked += 1


def test_permutation_invariance_bit_exact():
    rng = np.random.default_rng(7)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(2.0, mode)
        for _ in range(300):
            x, y = random_pair(rng, mode == SIGNED)
            perm = rng.permutation(len(x))
            assert jaccard(x[perm], y[perm], cfg) == jaccard(x, y, cfg)
            assert interiority(x[perm], y[perm], cfg) == interiority(x, y, cfg)
            assert coincidence(x[perm], y[perm], cfg) == coincidence(x, y, cfg)


def test_rows_match_scalar_bit_exact():
    rng = np.random.default_rng(8)
    for mode in (NONNEGATIVE, SIGNED):
        cfg = SimilarityConfig(3.0, mode)
        lo = -1.0 if mode == SIGNED else 0.0
        rows = rng.uniform(lo, 1.0, size=(50, 17))
        w = rng.uniform(lo, 1.0, size=17)
        values, degenerate = coincidence_rows(rows, w, cfg)
        assert not degenerate.any()
        for k in range(rows.shape[0]):
            assert values[k] == coincidence(rows[k], w, cfg)


def test_rows_degenerate_flags():
    rows = np.array([[0.0, 0.0], [0.3, 0.1]])
    w = np.zeros(2)
    values, degenerate = coincidence_rows(rows, w, SIGNED_CFG)
    assert values[0] == 0.0 and degenerate[0]
    assert values[1] == 0.0 and not degenerate[1]
