"""Real-multiplicity multisets and the Jaccard / interiority / coincidence indices.

A feature vector is treated as a multiset whose i-th element carries the real
multiplicity ``v[i]``.  Union and intersection cardinalities then become sums of
element-wise max and min, which is what the similarity indices below are built
from.  Signed mode extends the comparison to negative multiplicities: absolute
values enter the min/max terms and the Jaccard numerator picks up the sign
product ``sign(x_i) * sign(y_i)``.

All reductions use ``math.fsum`` (correctly rounded summation), so every index
is bit-exactly commutative and invariant under permuting both vectors with the
same permutation, regardless of term order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Mapping

import numpy as np

from .errors import AllZeroOperandsError, LengthMismatchError, NegativeEntryError

NONNEGATIVE = "nonnegative"
SIGNED = "signed"


@dataclass(frozen=True)
class SimilarityConfig:
    """How two multiplicity vectors are compared.

    ``strictness`` is the exponent applied to the Jaccard factor of the
    coincidence index; larger values make the comparison more selective.
    ``mode`` is ``"nonnegative"`` (entries must be >= 0) or ``"signed"``.
    """

    strictness: float = 1.0
    mode: str = NONNEGATIVE

    def __post_init__(self):
        if not (self.strictness > 0):
            raise ValueError(f"strictness must be > 0, got {self.strictness}")
        if self.mode not in (NONNEGATIVE, SIGNED):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def signed(self) -> bool:
        return self.mode == SIGNED


DEFAULT_CONFIG = SimilarityConfig()


def as_feature_vector(values) -> np.ndarray:
    """Validate and convert to a 1-D float64 array of finite multiplicities."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError(f"feature vector must be 1-D and non-empty, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("feature vector contains NaN or infinity")
    return v


def _prepare(x, y, cfg: SimilarityConfig):
    vx = as_feature_vector(x)
    vy = as_feature_vector(y)
    if vx.shape[0] != vy.shape[0]:
        raise LengthMismatchError(f"vector lengths differ: {vx.shape[0]} vs {vy.shape[0]}")
    if not cfg.signed and ((vx < 0).any() or (vy < 0).any()):
        raise NegativeEntryError("negative entries are not allowed in nonnegative mode")
    zx = not vx.any()
    zy = not vy.any()
    if zx and zy:
        raise AllZeroOperandsError("both vectors are all-zero")
    return vx, vy, zx or zy


def _index_sums(vx: np.ndarray, vy: np.ndarray, signed: bool):
    """Shared sums: Jaccard numerator/denominator, min-sum, smaller total mass."""
    ax = np.abs(vx)
    ay = np.abs(vy)
    mins = np.minimum(ax, ay)
    maxs = np.maximum(ax, ay)
    num_i = math.fsum(mins.tolist())
    if signed:
        num_j = math.fsum((np.sign(vx) * np.sign(vy) * mins).tolist())
    else:
        num_j = num_i
    den_j = math.fsum(maxs.tolist())
    den_i = min(math.fsum(ax.tolist()), math.fsum(ay.tolist()))
    return num_j, den_j, num_i, den_i


def pow_signed(base: float, exponent: float) -> float:
    """``sign(base) * |base| ** exponent``; keeps odd-integer behaviour and never goes complex."""
    if base > 0:
        return base ** exponent
    if base < 0:
        return -((-base) ** exponent)
    return 0.0


def jaccard(x, y, cfg: SimilarityConfig = DEFAULT_CONFIG) -> float:
    """Jaccard index: min-sum over max-sum.  In [0, 1], or [-1, 1] in signed mode."""
    vx, vy, one_zero = _prepare(x, y, cfg)
    if one_zero:
        return 0.0
    num_j, den_j, _, _ = _index_sums(vx, vy, cfg.signed)
    return num_j / den_j

def interiority(x, y, cfg: SimilarityConfig = DEFAULT_CONFIG) -> float:
    """Overlap index: min-sum over the smaller total mass.  Always in [0, 1]."""
    vx, vy, one_zero = _prepare(x, y, cfg)
    if one_zero:
        return 0.0
    _, _, num_i, den_i = _index_sums(vx, vy, cfg.signed)
    return num_i / den_i


def coincidence(x, y, cfg: SimilarityConfig = DEFAULT_CONFIG) -> float:
    """Coincidence index: the Jaccard factor raised to ``strictness``, times interiority."""
    vx, vy, one_zero = _prepare(x, y, cfg)
    if one_zero:
        return 0.0
    num_j, den_j, num_i, den_i = _index_sums(vx, vy, cfg.signed)
    j = num_j / den_j
    i = num_i / den_i
    return pow_signed(j, cfg.strictness) * i


def coincidence_rows(rows: np.ndarray, weights: np.ndarray, cfg: SimilarityConfig):
    """Coincidence of every row of ``rows`` (n, d) against one weight vector (d,).

    Returns ``(values, degenerate)`` where ``degenerate`` marks rows for which
    both operands were all-zero (those rows get value 0.0 instead of an error;
    batch scans must not abort on isolated degenerate pixels).  Rows where
    exactly one operand is all-zero get the regular value 0.0 unflagged.

    Bit-identical to calling :func:`coincidence` per row: same fsum reductions,
    same scalar power.  Inputs are assumed validated (finite, mode-legal).
    """
    rows = np.asarray(rows, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    aw = np.abs(w)
    ar = np.abs(rows)
    mins = np.minimum(ar, aw)
    maxs = np.maximum(ar, aw)
    if cfg.signed:
        num_j = _row_fsums(np.sign(rows) * np.sign(w) * mins)
        num_i = _row_fsums(mins)
    else:
        num_i = _row_fsums(mins)
        num_j = num_i
    den_j = _row_fsums(maxs)
    mass_r = _row_fsums(ar)
    mass_w = math.fsum(aw.tolist())

    n = rows.shape[0]
    degenerate = den_j == 0.0
    di = np.minimum(mass_r, mass_w)
    live = ~degenerate & (di > 0.0)
    # degenerate rows had both operands all-zero; rows with exactly one
    # all-zero operand have vanishing numerators, so their indices are 0
    out = np.zeros(n, dtype=np.float64)
    d = cfg.strictness
    if d == 1.0:
        # pow is the identity: element-wise ops match the scalar path bit-for-bit
        out[live] = (num_j[live] / den_j[live]) * (num_i[live] / di[live])
    else:
        for k in np.flatnonzero(live).tolist():
            j = num_j[k] / den_j[k]
            out[k] = pow_signed(j, d) * (num_i[k] / di[k])
    return out, degenerate


def _row_fsums(m: np.ndarray) -> np.ndarray:
    # IEEE addition of <= 2 floats is already the correctly rounded sum
    if m.shape[1] <= 2:
        return np.sum(m, axis=1)
    return np.array([math.fsum(row) for row in m.tolist()])


# ---------------------------------------------------------------------------
# Integer multisets (label -> multiplicity); backed by collections.Counter,
# whose | and & operators are exactly the max/min multiset union/intersection.
# ---------------------------------------------------------------------------

IntegerMultiset = Counter


def as_multiset(items: Mapping[Hashable, int]) -> Counter:
    """Validate a label -> multiplicity mapping; zero entries are dropped."""
    ms = Counter()
    for label, mult in items.items():
        if not isinstance(mult, int) or isinstance(mult, bool):
            raise ValueError(f"multiplicity of {label!r} must be an int, got {mult!r}")
        if mult < 0:
            raise ValueError(f"multiplicity of {label!r} is negative")
        if mult > 0:
            ms[label] = mult
    return ms


def ms_union(x: Mapping[Hashable, int], y: Mapping[Hashable, int]) -> Counter:
    """Multiset union: support is the union, multiplicities are element-wise max."""
    return as_multiset(x) | as_multiset(y)


def ms_intersection(x: Mapping[Hashable, int], y: Mapping[Hashable, int]) -> Counter:
    """Multiset intersection: shared support, multiplicities are element-wise min."""
    return as_multiset(x) & as_multiset(y)


def ms_cardinality(x: Mapping[Hashable, int]) -> int:
    """Total number of elements counting repetitions."""
    return sum(as_multiset(x).values())


def multiplicity_vector(ms: Mapping[Hashable, int], support) -> np.ndarray:
    """Embed a multiset as a multiplicity vector over an ordered support."""
    counts = as_multiset(ms)
    return np.array([float(counts.get(label, 0)) for label in support])
