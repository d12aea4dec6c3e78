#!/usr/bin/env python3
"""The accuracy landscape over the two output weights, with trajectories.

The two-layer network has just two free weights, so the whole objective
surface is computable: sweep it, count attraction basins, extract level sets,
and overlay the paths gradient ascent actually takes.
"""

from pathlib import Path

from mmnn import FeatureConfig, TrainConfig, basin_count, level_sets, sweep
from mmnn.landscape import contours_to_csv, grid_to_csv, grid_to_pgm
from mmnn.pipeline import build_network, default_arch
from mmnn.training import multi_start_train
from mmnn.synthetic import two_blob_scene

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

scene = two_blob_scene(size=48, noise=0.02, seed=7)
fcfg = FeatureConfig(radius=2)
net = build_network(scene.image, scene.points, fcfg,
                    default_arch(first_strictness=5.0, head_gain=20.0))

print("sweeping balanced accuracy over (w1, w2) in [-1, 1]^2 at pitch 0.05 ...")
grid = sweep(net, scene.image, scene.gold, fcfg,
             free=((1, 0, 0), (1, 0, 1)), ranges=((-1, 1), (-1, 1)),
             resolution=0.05, objective="ba", ba_threshold=0.5)
print(f"grid {grid.values.shape}, max BA {grid.max_value:.4f} "
      f"at (w1, w2) = {tuple(round(v, 2) for v in grid.argmax_point)}")
print(f"attraction basins (plateau-merged local maxima): {basin_count(grid)}")

grid_to_csv(grid, out / "landscape.csv")
grid_to_pgm(grid, out / "landscape.pgm")

levels = [0.7, 0.9, 0.95]
contours = level_sets(grid, levels)
contours_to_csv(contours, out / "landscape_contours.csv")
print(f"extracted {len(contours)} contour polylines at levels {levels}")

# trajectories climbing the same surface
cfg = TrainConfig(num_starts=6, max_steps=30, seed=17, objective="ba",
                  ba_threshold=0.5)
_, trajectories = multi_start_train(net, scene.image, scene.gold, fcfg, cfg)
print("\ngradient-ascent trajectories on this surface:")
for i, traj in enumerate(trajectories):
    w0, wN = traj.weights[0], traj.final_weights
    print(f"  start {i}: ({w0[0]:+.2f}, {w0[1]:+.2f}) -> "
          f"({wN[0]:+.2f}, {wN[1]:+.2f})  BA {traj.values[0]:.3f} -> "
          f"{traj.final_value:.3f}  ({len(traj)} points)")
    traj.to_csv(out / f"landscape_traj_{i}.csv")

best = max(t.final_value for t in trajectories)
print(f"\nbest trajectory BA {best:.4f} vs grid max {grid.max_value:.4f}")
print(f"wrote landscape CSV/PGM, contours, and trajectories to {out}/")
