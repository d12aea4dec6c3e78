"""Exhaustive 2-D objective sweeps over weight pairs, level sets, basins.

A sweep fixes every network weight except two selected components and
evaluates the training objective on a regular grid over those two, producing
the data behind accuracy heatmaps, iso-contours, and trajectory overlays.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import AllZeroOperandsError
from .image import BinaryMask, FeatureConfig, Image, save_gray_pgm
from .network import NetworkSpec
from .training import OBJECTIVE_BA, ScanObjective, flatten_weights, selector_pairs


class LandscapeGrid:
    """Objective values over a 2-D weight grid.

    ``values[i, j]`` is the objective with the first free weight at
    ``axis1[i]`` and the second at ``axis2[j]``.  ``flags`` marks cells whose
    evaluation hit degenerate (all-zero operand) similarity input.
    """

    def __init__(self, axis1: np.ndarray, axis2: np.ndarray, values: np.ndarray,
                 flags: np.ndarray | None = None):
        self.axis1 = np.asarray(axis1, dtype=np.float64)
        self.axis2 = np.asarray(axis2, dtype=np.float64)
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.shape != (self.axis1.shape[0], self.axis2.shape[0]):
            raise ValueError("values shape does not match axis lengths")
        if not np.isfinite(self.values).all():
            raise ValueError("landscape contains non-finite values")
        self.flags = (np.zeros(self.values.shape, dtype=bool)
                      if flags is None else np.asarray(flags, dtype=bool))
        self.argmax_cell = tuple(
            int(k) for k in np.unravel_index(np.argmax(self.values),
                                             self.values.shape))

    @property
    def max_value(self) -> float:
        return float(self.values[self.argmax_cell])

    @property
    def argmax_point(self) -> tuple:
        i, j = self.argmax_cell
        return (float(self.axis1[i]), float(self.axis2[j]))


def grid_axis(lo: float, hi: float, resolution: float) -> np.ndarray:
    """Nodes lo, lo+res, ... up to hi (inclusive when the range divides evenly)."""
    if not (resolution > 0):
        raise ValueError("resolution must be > 0")
    if hi <= lo:
        raise ValueError("range must satisfy lo < hi")
    count = int(np.floor((hi - lo) / resolution + 1e-9)) + 1
    return lo + resolution * np.arange(count)


def refs_from_flat_indices(net: NetworkSpec, indices,
                           trainable_layers: tuple | None = None) -> list:
    """Map flat positions in the trainable weight vector to (layer, neuron, index)."""
    pairs = selector_pairs(net, trainable_layers)
    table = []
    for li, ni in pairs:
        for k in range(net.layers[li][ni].input_dim):
            table.append((li, ni, k))
    refs = []
    for idx in indices:
        if not (0 <= idx < len(table)):
            raise ValueError(f"flat weight index {idx} out of range (0..{len(table) - 1})")
        refs.append(table[idx])
    return refs


def sweep(net: NetworkSpec, img: Image, gold: BinaryMask, fcfg: FeatureConfig,
          free, ranges=((-1.0, 1.0), (-1.0, 1.0)), resolution: float = 0.05,
          objective: str = OBJECTIVE_BA, ba_threshold: float = 0.5) -> LandscapeGrid:
    """Evaluate the objective over a grid spanned by two free weight components.

    ``free`` is a pair of (layer, neuron, index) references; every other weight
    keeps its current value.  Cells whose evaluation degenerates (all-zero
    similarity operands) store objective 0 and are flagged.
    """
    ref1, ref2 = free
    pairs = sorted({(ref1[0], ref1[1]), (ref2[0], ref2[1])})
    scan = ScanObjective(net, img, gold, fcfg, pairs, kind=objective,
                         ba_threshold=ba_threshold)
    base = flatten_weights(net, pairs)
    positions = []
    for li, ni, k in (ref1, ref2):
        offset = 0
        for pl, pn in pairs:
            if (pl, pn) == (li, ni):
                break
            offset += net.layers[pl][pn].input_dim
        if not (0 <= k < net.layers[li][ni].input_dim):
            raise ValueError(f"weight index {k} out of range for layer {li} neuron {ni}")
        positions.append(offset + k)
    if positions[0] == positions[1]:
        raise ValueError("the two free weights must be distinct")

    axis1 = grid_axis(*ranges[0], resolution)
    axis2 = grid_axis(*ranges[1], resolution)
    values = np.zeros((axis1.shape[0], axis2.shape[0]), dtype=np.float64)
    flags = np.zeros(values.shape, dtype=bool)
    probe = base.copy()
    for i, w1 in enumerate(axis1.tolist()):
        for j, w2 in enumerate(axis2.tolist()):
            probe[positions[0]] = w1
            probe[positions[1]] = w2
            try:
                value, events = scan.evaluate(probe)
            except AllZeroOperandsError:
                value, events = 0.0, 1
            if events:
                values[i, j] = 0.0
                flags[i, j] = True
            else:
                values[i, j] = value
    return LandscapeGrid(axis1, axis2, values, flags)


def level_sets(grid: LandscapeGrid, levels) -> list:
    """Marching-squares iso-contours as (level, points) pairs.

    Points are (w1, w2) coordinates linearly interpolated on grid cell edges;
    one level can produce several polylines.
    """
    from skimage.measure import find_contours

    res1 = grid.axis1[1] - grid.axis1[0] if grid.axis1.shape[0] > 1 else 1.0
    res2 = grid.axis2[1] - grid.axis2[0] if grid.axis2.shape[0] > 1 else 1.0
    contours = []
    for level in levels:
        for poly in find_contours(grid.values, level):
            points = np.column_stack([grid.axis1[0] + poly[:, 0] * res1,
                                      grid.axis2[0] + poly[:, 1] * res2])
            contours.append((float(level), points))
    return contours


def basin_count(grid: LandscapeGrid) -> int:
    """Number of local maxima under 8-connectivity, merging equal-value plateaus."""
    v = grid.values
    n1, n2 = v.shape
    visited = np.zeros(v.shape, dtype=bool)
    count = 0
    for si in range(n1):
        for sj in range(n2):
            if visited[si, sj]:
                continue
            value = v[si, sj]
            stack = [(si, sj)]
            visited[si, sj] = True
            is_max = True
            while stack:
                i, j = stack.pop()
                for di in (-1, 0, 1):
                    for dj in (-1, 0, 1):
                        if di == 0 and dj == 0:
                            continue
                        ii, jj = i + di, j + dj
                        if not (0 <= ii < n1 and 0 <= jj < n2):
                            continue
                        if v[ii, jj] > value:
                            is_max = False
                        elif v[ii, jj] == value and not visited[ii, jj]:
                            visited[ii, jj] = True
                            stack.append((ii, jj))
            if is_max:
                count += 1
    return count


def grid_to_csv(grid: LandscapeGrid, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["w1", "w2", "value"])
        for i, w1 in enumerate(grid.axis1.tolist()):
            for j, w2 in enumerate(grid.axis2.tolist()):
                writer.writerow([repr(w1), repr(w2), repr(float(grid.values[i, j]))])


def grid_to_pgm(grid: LandscapeGrid, path) -> None:
    """Grayscale heatmap: objective 0 maps to black, 1 to white (clipped)."""
    save_gray_pgm(grid.values, path)


def contours_to_csv(contours, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["contour", "level", "w1", "w2"])
        for cid, (level, points) in enumerate(contours):
            for w1, w2 in points.tolist():
                writer.writerow([cid, repr(level), repr(w1), repr(w2)])
