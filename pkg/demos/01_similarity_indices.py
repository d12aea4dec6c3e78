#!/usr/bin/env python3
"""Multiset similarity indices from the ground up.

Walks through integer multisets, their union/intersection arithmetic, and the
three similarity indices (Jaccard, interiority, coincidence) on real-valued
multiplicity vectors, including the signed extension and the strictness knob.
"""

import numpy as np

from mmnn import (SimilarityConfig, coincidence, interiority, jaccard,
                  ms_cardinality, ms_intersection, ms_union)

# --- integer multisets --------------------------------------------------

x = {"a": 3, "b": 2}            # {a, a, a, b, b}
y = {"a": 1, "b": 3, "d": 1}    # {a, b, b, b, d}

print("X =", x, " |X| =", ms_cardinality(x))
print("Y =", y, " |Y| =", ms_cardinality(y))
print("X ∪ Y =", dict(ms_union(x, y)), " cardinality", ms_cardinality(ms_union(x, y)))
print("X ∩ Y =", dict(ms_intersection(x, y)), " cardinality",
      ms_cardinality(ms_intersection(x, y)))

# --- real multiplicity vectors ------------------------------------------

# A vector is a multiset whose i-th element has multiplicity v[i]; min-sums
# and max-sums replace intersection and union cardinalities.
a = np.array([3.0, 2.0, 0.0])
b = np.array([1.0, 3.0, 1.0])
cfg = SimilarityConfig(strictness=1.0, mode="nonnegative")
print("\nvectors a =", a, " b =", b)
print("jaccard     =", jaccard(a, b, cfg), "(min-sum 3 over max-sum 7)")
print("interiority =", interiority(a, b, cfg), "(min-sum 3 over smaller mass 5)")
print("coincidence =", coincidence(a, b, cfg), "(= jaccard * interiority here)")

# --- strictness ----------------------------------------------------------

# Raising the strictness exponent sharpens the comparison: the Jaccard factor
# is taken to a power before multiplying by interiority.
print("\nstrictness sweep on the same pair:")
for d in (1, 2, 3, 5, 8):
    c = coincidence(a, b, SimilarityConfig(strictness=float(d)))
    print(f"  D = {d}: coincidence = {c:.5f}")

# --- signed mode ----------------------------------------------------------

# Negative multiplicities enter through absolute values plus a sign product in
# the Jaccard numerator, so anti-aligned vectors score negatively.
s = SimilarityConfig(strictness=1.0, mode="signed")
print("\nsigned mode:")
print("  aligned      ", coincidence([0.5, 0.5], [0.5, 0.5], s))
print("  anti-aligned ", coincidence([0.5, 0.5], [-0.5, -0.5], s))
print("  mixed        ", coincidence([0.8, 0.1], [1.0, -1.0], s))
print("  orthogonal-ish", jaccard([1.0, -1.0], [1.0, 1.0], s))
